#include "lmpfa/surface_io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

namespace lmpfa {

namespace {

constexpr std::string_view kMagic = "# lmpfa-surface";

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw SurfaceFormatError("surface file: bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

int parse_int(std::string_view text) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw SurfaceFormatError("surface file: bad N '" + std::string(text) + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw SurfaceFormatError("cannot format value");
    }
    return std::string(buf, ptr);
}

}  // namespace

void write_surface(std::ostream& out, const PriceSurface& s) {
    const int m = s.values.nodes_per_axis();
    out << kMagic << " N=" << m - 2 << " xmax=" << format_double(s.x_max) << " ymax=" << format_double(s.y_max)
        << " tau=" << format_double(s.tau) << " payoff=" << to_string(s.payoff) << '\n';
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (j > 0) {
                out << ' ';
            }
            out << format_double(s.values(i, j));
        }
        out << '\n';
    }
}

PriceSurface read_surface(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind(kMagic, 0) != 0) {
        throw SurfaceFormatError("surface file: missing '# lmpfa-surface' header");
    }
    std::map<std::string, std::string> fields;
    std::istringstream hs(header.substr(kMagic.size()));
    std::string token;
    while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw SurfaceFormatError("surface file: malformed header field '" + token + "'");
        }
        fields[token.substr(0, eq)] = token.substr(eq + 1);
    }
    for (const char* key : {"N", "xmax", "ymax", "tau", "payoff"}) {
        if (fields.find(key) == fields.end()) {
            throw SurfaceFormatError(std::string("surface file: header lacks ") + key);
        }
    }
    const int n = parse_int(fields["N"]);
    if (n < 1) {
        throw SurfaceFormatError("surface file: N must be positive");
    }
    PriceSurface s{NodeField(n + 2), parse_double(fields["xmax"], "xmax"), parse_double(fields["ymax"], "ymax"),
                   parse_double(fields["tau"], "tau"), PayoffKind::CallOnMax};
    try {
        s.payoff = parse_payoff(fields["payoff"]);
    } catch (const std::invalid_argument& e) {
        throw SurfaceFormatError(std::string("surface file: ") + e.what());
    }
    std::string line;
    for (int i = 0; i < n + 2; ++i) {
        if (!std::getline(in, line)) {
            throw SurfaceFormatError("surface file: expected " + std::to_string(n + 2) + " value lines, got " +
                                     std::to_string(i));
        }
        std::istringstream ls(line);
        for (int j = 0; j < n + 2; ++j) {
            if (!(ls >> token)) {
                throw SurfaceFormatError("surface file: line " + std::to_string(i + 2) + " is short");
            }
            s.values(i, j) = parse_double(token, "value");
        }
        if (ls >> token) {
            throw SurfaceFormatError("surface file: line " + std::to_string(i + 2) + " is long");
        }
    }
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            throw SurfaceFormatError("surface file: trailing data after the value lines");
        }
    }
    return s;
}

void dump_surface(const PriceSurface& surface, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    write_surface(out, surface);
    if (!out) {
        throw std::runtime_error("write to " + path.string() + " failed");
    }
}

PriceSurface load_surface(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_surface(in);
}

void check_surface_grid(const PriceSurface& surface, const Grid2D& grid) {
    if (surface.n() != grid.n() || surface.x_max != grid.x().extent() || surface.y_max != grid.y().extent()) {
        throw GridMismatchError("surface grid (N=" + std::to_string(surface.n()) + ", " +
                                format_double(surface.x_max) + " x " + format_double(surface.y_max) +
                                ") does not match the expected grid (N=" + std::to_string(grid.n()) + ", " +
                                format_double(grid.x().extent()) + " x " + format_double(grid.y().extent()) + ")");
    }
}

PriceSurface load_surface(const std::filesystem::path& path, const Grid2D& grid) {
    PriceSurface s = load_surface(path);
    check_surface_grid(s, grid);
    return s;
}

}  // namespace lmpfa
