#pragma once

#include "dicke/phasespace.hpp"
#include "dicke/quantum.hpp"

#include <string>
#include <vector>

namespace dicke {

/// Binary state container (little-endian): magic "DICKESV1", float64 j,
/// uint64 n_max, uint64 dim, then dim (re, im) float64 pairs.
void save_state(const StateVector& psi, const std::string& path);
StateVector load_state(const std::string& path);

/// Shortest round-trip decimal representation ("%.17g").
std::string format_double(double v);

/// '#'-prefixed provenance lines from key=value pairs (insertion order kept).
std::string provenance_header(const std::vector<std::pair<std::string, std::string>>& kv);

void write_text_file(const std::string& path, const std::string& content);

/// CSV: header comments, then "theta,phi,value" rows.
std::string husimi_csv(const HusimiGrid& grid, const std::string& header);
/// Plain text matrix (rows = theta, cols = phi) with '#' header lines.
std::string husimi_raster(const HusimiGrid& grid, const std::string& header);
std::string disc_raster_text(const DiscRaster& disc, const std::string& header);

} // namespace dicke
