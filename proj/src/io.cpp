#include "dicke/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dicke {

namespace {
constexpr char kMagic[8] = {'D', 'I', 'C', 'K', 'E', 'S', 'V', '1'};
}

void save_state(const StateVector& psi, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_state: cannot open " + path);
    out.write(kMagic, 8);
    const double j = psi.basis.j;
    const std::uint64_t n_max = static_cast<std::uint64_t>(psi.basis.n_max);
    const std::uint64_t dim = psi.amp.size();
    out.write(reinterpret_cast<const char*>(&j), 8);
    out.write(reinterpret_cast<const char*>(&n_max), 8);
    out.write(reinterpret_cast<const char*>(&dim), 8);
    for (const Complex& c : psi.amp) {
        const double re = c.real(), im = c.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!out) throw std::runtime_error("save_state: write failed for " + path);
}

StateVector load_state(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_state: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("load_state: bad magic in " + path);
    double j = 0.0;
    std::uint64_t n_max = 0, dim = 0;
    in.read(reinterpret_cast<char*>(&j), 8);
    in.read(reinterpret_cast<char*>(&n_max), 8);
    in.read(reinterpret_cast<char*>(&dim), 8);
    StateVector psi;
    psi.basis.j = j;
    psi.basis.n_max = static_cast<int>(n_max);
    psi.basis.validate();
    if (dim != psi.basis.dim()) throw std::runtime_error("load_state: inconsistent dimension in " + path);
    psi.amp.resize(dim);
    for (Complex& c : psi.amp) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        c = Complex{re, im};
    }
    if (!in) throw std::runtime_error("load_state: truncated file " + path);
    return psi;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string provenance_header(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        out += "# ";
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::string husimi_csv(const HusimiGrid& grid, const std::string& header) {
    std::string out = header;
    out += "# columns: theta,phi,value\n";
    for (int it = 0; it < grid.n_theta(); ++it)
        for (int ip = 0; ip < grid.n_phi(); ++ip) {
            out += format_double(grid.theta[it]);
            out += ',';
            out += format_double(grid.phi[ip]);
            out += ',';
            out += format_double(grid.value(it, ip));
            out += '\n';
        }
    return out;
}

std::string husimi_raster(const HusimiGrid& grid, const std::string& header) {
    std::string out = header;
    out += "# raster: rows = theta (0..pi), cols = phi (0..2pi)\n";
    out += "# rows = " + std::to_string(grid.n_theta()) + " cols = " + std::to_string(grid.n_phi()) + "\n";
    for (int it = 0; it < grid.n_theta(); ++it) {
        for (int ip = 0; ip < grid.n_phi(); ++ip) {
            if (ip) out += ' ';
            out += format_double(grid.value(it, ip));
        }
        out += '\n';
    }
    return out;
}

std::string disc_raster_text(const DiscRaster& disc, const std::string& header) {
    std::string out = header;
    out += "# disc raster: theta = 0 at center, pi/2 at rim; phi counterclockwise from top\n";
    out += "# rows = " + std::to_string(disc.size) + " cols = " + std::to_string(disc.size) + "\n";
    for (int r = 0; r < disc.size; ++r) {
        for (int c = 0; c < disc.size; ++c) {
            if (c) out += ' ';
            out += format_double(disc.pixels[static_cast<std::size_t>(r) * disc.size + c]);
        }
        out += '\n';
    }
    return out;
}

} // namespace dicke
