#include "plotdata.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mmmeta::tools {
namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace

std::string curve_file_stem(const std::string& curve) {
    std::string s = curve;
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') c = '_';
    return s.empty() ? "curve" : s;
}

std::vector<std::string> emit_plotdata(const ResultTable& table, const std::string& dir, const std::string& format) {
    if (format != "csv") throw SpecError("format: only csv is supported, got " + format);
    if (table.rows.empty()) throw SpecError("table: no rows to write");
    const auto curves = table.curves();
    std::vector<std::string> stems;
    for (const auto& c : curves) {
        const std::string stem = curve_file_stem(c);
        for (const auto& s : stems)
            if (s == stem) throw SpecError("table: curves '" + c + "' and another map to the same file " + stem);
        stems.push_back(stem);
    }

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());

    std::vector<std::string> written;
    nlohmann::ordered_json manifest;
    manifest["kind"] = table.kind;
    manifest["columns"] = csv_columns();
    manifest["sweep"] = {{"name", table.sweep_name}, {"unit", table.sweep_unit}};
    manifest["value"] = {{"name", table.value_name}, {"unit", table.value_unit}};
    auto list = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto path = std::filesystem::path(dir) / (stems[i] + ".csv");
        write_file(path, to_csv(table, curves[i]));
        written.push_back(path.string());
        list.push_back({{"name", curves[i]}, {"file", stems[i] + ".csv"}});
    }
    manifest["curves"] = list;
    manifest["notes"] = table.notes;
    const auto mpath = std::filesystem::path(dir) / "manifest.json";
    write_file(mpath, manifest.dump(2) + "\n");
    written.push_back(mpath.string());
    return written;
}

}  // namespace mmmeta::tools
