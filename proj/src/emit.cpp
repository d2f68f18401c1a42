#include "bistab/emit.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bistab {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("Table: row width does not match header");
    rows_.push_back(std::move(cells));
}

void Table::add_numeric_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (const double v : values) cells.push_back(format_g17(v));
    add_row(std::move(cells));
}

void Table::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t c = 0; c < columns_.size(); ++c)
        out << columns_[c] << (c + 1 < columns_.size() ? "," : "\n");
    for (const auto& row : rows_)
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c] << (c + 1 < row.size() ? "," : "\n");
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return hash;
}

OutputRecord record_output(const std::filesystem::path& path) {
    OutputRecord rec;
    rec.file = path.filename().string();
    rec.bytes = std::filesystem::file_size(path);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(path)));
    rec.fnv1a64 = buf;
    return rec;
}

void write_manifest(const std::filesystem::path& dir, const std::string& subcommand,
                    const std::string& config_ini, double duration_seconds,
                    const std::vector<OutputRecord>& outputs) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["duration_seconds"] = duration_seconds;
    j["config"] = config_ini;
    j["outputs"] = nlohmann::json::array();
    for (const auto& rec : outputs)
        j["outputs"].push_back(
            {{"file", rec.file}, {"bytes", rec.bytes}, {"fnv1a64", rec.fnv1a64}});
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << j.dump(2) << "\n";
}

}  // namespace bistab
