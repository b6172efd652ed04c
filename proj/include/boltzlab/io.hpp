#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "boltzlab/grid.hpp"

namespace boltzlab {

using Json = nlohmann::ordered_json;

// %.17g; non-finite values become "nan", "inf" or "-inf".
std::string format_double(double x);

void write_snapshot(std::ostream& os, const DensityField& f);
void write_snapshot(const std::string& path, const DensityField& f);
DensityField read_snapshot(std::istream& is);
DensityField read_snapshot(const std::string& path);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void row(const std::vector<double>& values);
    std::string str() const;
    void save(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

// JSON text with every floating value printed by format_double; non-finite
// values are emitted as null.
std::string dump_json(const Json& j, int indent = 2);
void save_text(const std::string& path, const std::string& text);

}  // namespace boltzlab
