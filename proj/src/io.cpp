#include "srhf/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace srhf {

namespace {

std::runtime_error io_error(const std::string& path, const char* what) {
  return std::runtime_error("io: " + std::string(what) + ": " + path);
}

}  // namespace

void write_field_binary(const std::string& path, const GridFieldD& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path, "cannot open for writing");
  const std::uint32_t header[3] = {static_cast<std::uint32_t>(field.grid.dim),
                                   static_cast<std::uint32_t>(field.grid.box),
                                   static_cast<std::uint32_t>(field.grid.pts)};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(sizeof(double) * field.values.size()));
  if (!out) throw io_error(path, "write failed");
}

GridFieldD read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path, "cannot open for reading");
  std::uint32_t header[3];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw io_error(path, "truncated header");
  GridSpec g{static_cast<int>(header[0]), static_cast<int>(header[1]), static_cast<int>(header[2])};
  g.validate();
  GridFieldD field(g);
  in.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(sizeof(double) * field.values.size()));
  if (!in) throw io_error(path, "truncated data");
  return field;
}

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_field_csv(const std::string& path, const GridFieldD& field) {
  std::ostringstream out;
  const GridSpec& g = field.grid;
  for (int a = 0; a < g.dim; ++a) out << "x" << a << ",";
  out << "value\n";
  for (Index i = 0; i < g.total(); ++i) {
    const auto idx = unflatten(g, i);
    for (int a = 0; a < g.dim; ++a) out << format_g17(g.coord(idx[a])) << ",";
    out << format_g17(field.values[i]) << "\n";
  }
  write_text(path, out.str());
}

std::string records_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "seed,L,m,mode,kinetic,interaction,particles,grand_value,iterations,wall_ms\n";
  for (const auto& r : records) {
    out << r.seed << "," << r.box << "," << format_g17(r.mass) << "," << r.mode << ","
        << format_g17(r.energy.kinetic_per_vol) << "," << format_g17(r.energy.interaction_per_vol)
        << "," << format_g17(r.energy.particles_per_vol) << "," << format_g17(r.energy.grand_per_vol)
        << "," << r.iterations << "," << format_g17(r.wall_ms) << "\n";
  }
  return out.str();
}

std::string box_stats_csv(const std::vector<BoxStats>& stats) {
  std::ostringstream out;
  out << "L,count,mean,stddev,stderr,all_converged\n";
  for (const auto& s : stats) {
    out << s.box << "," << s.count << "," << format_g17(s.mean) << "," << format_g17(s.stddev) << ","
        << format_g17(s.stderr_mean) << "," << (s.all_converged ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string mass_stats_csv(const std::vector<MassStats>& stats) {
  std::ostringstream out;
  out << "m,count,mean,stddev,all_converged\n";
  for (const auto& s : stats) {
    out << format_g17(s.mass) << "," << s.count << "," << format_g17(s.mean) << ","
        << format_g17(s.stddev) << "," << (s.all_converged ? 1 : 0) << "\n";
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path, "cannot open for writing");
  out << text;
  if (!out) throw io_error(path, "write failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace srhf
