#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace volreg {

/// Plain key=value experiment description; the scenario name travels as the
/// "scenario" key. render() and parse() round-trip exactly.
struct ExperimentConfig {
    std::map<std::string, std::string> values;

    std::string scenario() const;
    void set(std::string key, std::string value);
    const std::string* find(std::string_view key) const;

    std::string render() const;
    static ExperimentConfig parse(std::string_view text);

    /// Throws ValidationError naming the first key outside `allowed`.
    void require_keys(const std::vector<std::string>& allowed) const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Minimal CSV emitter: one header row, '.' decimal separator, %.17g floats.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    void append_row(const std::vector<std::string>& cells);
    std::string str() const;
    void write_file(const std::string& path) const;

    static std::string format(double v);
    static std::string format(int v);

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace volreg
