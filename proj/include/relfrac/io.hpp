#pragma once

#include "relfrac/grid.hpp"

#include <string>
#include <utility>
#include <vector>

// Artifact emission: bit-exact binary field dumps, deterministic CSV
// writers, run manifests, and a minimal standalone SVG line plot.

namespace relfrac::io {

/// Binary dump with a small header (magic "RFGF", version, dim, L, n);
/// round trip is bit-exact.
void write_field(const std::string& path, const grid::GridField& u);
grid::GridField read_field(const std::string& path);

/// Deterministic CSV: fixed "%.12g" number formatting, LF line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_number(double v); // the shared %.12g formatter

/// key = value manifest, one entry per line, sorted by key.
void write_manifest(const std::string& path,
                    std::vector<std::pair<std::string, std::string>> entries);

/// Standalone SVG polyline of y(x); returns false (after a best-effort
/// cleanup) instead of throwing so plotting can never fail a run.
bool write_svg_plot(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& title);

} // namespace relfrac::io
