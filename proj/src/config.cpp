#include "volreg/config.hpp"

#include <cstdio>
#include <fstream>

#include "volreg/errors.hpp"

namespace volreg {

std::string ExperimentConfig::scenario() const {
    const std::string* s = find("scenario");
    return s ? *s : std::string();
}

void ExperimentConfig::set(std::string key, std::string value) {
    values[std::move(key)] = std::move(value);
}

const std::string* ExperimentConfig::find(std::string_view key) const {
    auto it = values.find(std::string(key));
    return it == values.end() ? nullptr : &it->second;
}

std::string ExperimentConfig::render() const {
    std::string out;
    for (const auto& [k, v] : values) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    ExperimentConfig cfg;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected key=value, got '" + std::string(line) + "'");
        }
        cfg.values[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
    }
    return cfg;
}

void ExperimentConfig::require_keys(const std::vector<std::string>& allowed) const {
    for (const auto& [k, v] : values) {
        bool ok = false;
        for (const auto& a : allowed) {
            if (k == a) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ValidationError("config: unknown key '" + k + "'");
    }
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::append_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) {
        throw ValidationError("csv: row width does not match header");
    }
    rows_.push_back(cells);
}

std::string CsvWriter::str() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("csv: cannot open output file '" + path + "'");
    f << str();
    if (!f) throw NumericalError("csv: write failed for '" + path + "'");
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string CsvWriter::format(int v) {
    return std::to_string(v);
}

}  // namespace volreg
