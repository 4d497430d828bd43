#include "relfrac/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace relfrac::io {

namespace {
constexpr char kMagic[4] = {'R', 'F', 'G', 'F'};
constexpr std::int32_t kVersion = 1;
} // namespace

void write_field(const std::string& path, const grid::GridField& u) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    out.write(kMagic, 4);
    std::int32_t version = kVersion, dim = u.spec.dim, n = u.spec.n;
    double L = u.spec.half_width;
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&L), sizeof L);
    out.write(reinterpret_cast<const char*>(u.values.data()),
              static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_field: short write to " + path);
}

grid::GridField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    char magic[4];
    std::int32_t version = 0, dim = 0, n = 0;
    double L = 0.0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&dim), sizeof dim);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&L), sizeof L);
    if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kVersion)
        throw std::runtime_error("read_field: bad header in " + path);
    grid::GridSpec spec;
    spec.dim = dim;
    spec.half_width = L;
    spec.n = n;
    spec.validate();
    grid::GridField u(spec);
    in.read(reinterpret_cast<char*>(u.values.data()),
            static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_field: truncated payload in " + path);
    return u;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary); // binary: LF endings everywhere
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_number(row[i]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_csv: short write to " + path);
}

void write_manifest(const std::string& path,
                    std::vector<std::pair<std::string, std::string>> entries) {
    std::sort(entries.begin(), entries.end());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

bool write_svg_plot(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& title) {
    if (xs.size() != ys.size() || xs.size() < 2) return false;
    double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) return false;
        xmin = std::min(xmin, xs[i]);
        xmax = std::max(xmax, xs[i]);
        ymin = std::min(ymin, ys[i]);
        ymax = std::max(ymax, ys[i]);
    }
    if (xmax == xmin) return false;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double W = 640, H = 420, pad = 50;
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n"
        << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double px = pad + (xs[i] - xmin) / (xmax - xmin) * (W - 2 * pad);
        double py = H - pad - (ys[i] - ymin) / (ymax - ymin) * (H - 2 * pad);
        out << format_number(px) << "," << format_number(py) << " ";
    }
    out << "\"/>\n"
        << "<text x=\"" << pad << "\" y=\"" << H - 12 << "\" font-size=\"11\">x: ["
        << format_number(xmin) << ", " << format_number(xmax) << "]  y: ["
        << format_number(ymin) << ", " << format_number(ymax) << "]</text>\n</svg>\n";
    return static_cast<bool>(out);
}

} // namespace relfrac::io
