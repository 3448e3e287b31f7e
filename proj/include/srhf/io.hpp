// io.hpp - persistence: binary grid fields, CSV tables, 17-digit decimals.

#pragma once

#include "srhf/experiments.hpp"
#include "srhf/grid.hpp"

#include <string>
#include <vector>

namespace srhf {

// Flat binary field file: header of three little-endian uint32 (d, L, N),
// then (N*L)^d little-endian doubles in row-major node order.
void write_field_binary(const std::string& path, const GridFieldD& field);
GridFieldD read_field_binary(const std::string& path);

// Plain CSV with node coordinates and the value; intended for small fields.
void write_field_csv(const std::string& path, const GridFieldD& field);

// Shortest exact decimal used everywhere: 17 significant digits.
std::string format_g17(double value);

// Per-run table, fixed column order:
// seed,L,m,mode,kinetic,interaction,particles,grand_value,iterations,wall_ms
std::string records_csv(const std::vector<ExperimentRecord>& records);

// Plot-ready aggregates.
std::string box_stats_csv(const std::vector<BoxStats>& stats);
std::string mass_stats_csv(const std::vector<MassStats>& stats);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace srhf
