// emit.hpp — Delimited text tables (UTF-8, LF, 17 significant digits) and the
// per-run reproducibility manifest.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bistab {

inline constexpr const char* kVersion = "0.1.0";

std::string format_g17(double v);

class Table {
  public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<std::string> cells);
    void add_numeric_row(const std::vector<double>& values);

    std::size_t n_rows() const { return rows_.size(); }
    void write_csv(const std::filesystem::path& path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

struct OutputRecord {
    std::string file;
    std::uintmax_t bytes = 0;
    std::string fnv1a64;
};

OutputRecord record_output(const std::filesystem::path& path);

// manifest.json: resolved config, version, wall-clock duration, checksums.
void write_manifest(const std::filesystem::path& dir, const std::string& subcommand,
                    const std::string& config_ini, double duration_seconds,
                    const std::vector<OutputRecord>& outputs);

}  // namespace bistab
