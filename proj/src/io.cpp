#include "boltzlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace boltzlab {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_snapshot(std::ostream& os, const DensityField& f) {
    const PhaseGrid& g = f.grid;
    os << "# d=" << g.d() << " mode=" << to_string(g.mode()) << " n_x=" << g.n_x() << " n_v=" << g.n_v()
       << " x_extent=" << format_double(g.x_extent()) << " v_extent=" << format_double(g.v_extent())
       << " time=" << format_double(f.time) << "\n";
    const int D = g.dims();
    int idx[kMaxAxes];
    double z[kMaxAxes];
    for (std::size_t n = 0; n < f.size(); ++n) {
        g.unflatten(n, idx);
        g.node_coords(n, z);
        for (int a = 0; a < D; ++a) os << idx[a] << ',';
        for (int a = 0; a < D; ++a) os << format_double(z[a]) << ',';
        os << format_double(f.values[n]) << "\n";
    }
}

void write_snapshot(const std::string& path, const DensityField& f) {
    std::ostringstream os;
    write_snapshot(os, f);
    save_text(path, os.str());
}

DensityField read_snapshot(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("# ", 0) != 0) throw std::runtime_error("snapshot: missing header");
    std::istringstream hs(header.substr(2));
    std::string tok;
    int d = 1, n_x = 1, n_v = 3;
    double xe = 0.0, ve = 1.0, t = 0.0;
    GridMode mode = GridMode::homogeneous;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("snapshot: malformed header token " + tok);
        const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
        if (k == "d") d = std::stoi(v);
        else if (k == "mode") mode = grid_mode_from_string(v);
        else if (k == "n_x") n_x = std::stoi(v);
        else if (k == "n_v") n_v = std::stoi(v);
        else if (k == "x_extent") xe = std::stod(v);
        else if (k == "v_extent") ve = std::stod(v);
        else if (k == "time") t = std::stod(v);
        else throw std::runtime_error("snapshot: unknown header key " + k);
    }
    const PhaseGrid g = mode == GridMode::homogeneous ? PhaseGrid::homogeneous(d, n_v, ve)
                                                      : PhaseGrid::inhomogeneous(d, n_x, xe, n_v, ve);
    DensityField f(g, t);
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (n >= f.size()) throw std::runtime_error("snapshot: too many rows");
        const auto last = line.rfind(',');
        f.values[n++] = std::stod(line.substr(last + 1));
    }
    if (n != f.size()) throw std::runtime_error("snapshot: row count does not match the grid");
    return f;
}

DensityField read_snapshot(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_snapshot(is);
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) throw std::invalid_argument("csv: row width does not match the header");
    rows_.push_back(values);
}

std::string CsvWriter::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << "\n";
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
        os << "\n";
    }
    return os.str();
}

void CsvWriter::save(const std::string& path) const { save_text(path, str()); }

namespace {

void dump(std::ostringstream& os, const Json& j, int indent, int level) {
    const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * level), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',' << nl;
                first = false;
                os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
                dump(os, it.value(), indent, level + 1);
            }
            os << nl << close << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << '[' << nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ',' << nl;
                os << pad;
                dump(os, j[i], indent, level + 1);
            }
            os << nl << close << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            os << (std::isfinite(x) ? format_double(x) : "null");
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::ostringstream os;
    dump(os, j, indent, 0);
    os << "\n";
    return os.str();
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
    if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace boltzlab
