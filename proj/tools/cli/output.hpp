#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace saplab::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Ten significant digits; inf/nan print as "inf"/"nan".
std::string format_number(double v);

std::uint64_t fnv1a64(std::string_view text);

/// `# sap_lab <version> command=<cmd> config_hash=<hex> seed=<n>`
std::string provenance(std::string_view command, std::string_view canonical_config,
                       std::uint64_t seed);

/// CSV writer: provenance comment, header row, then data rows.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& provenance_line,
            const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace saplab::cli
