#include "cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skewspec::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},     {"parameters", m.parameters}, {"seed", m.seed},
          {"artifacts", m.artifacts}, {"version", m.version},       {"wall_time", m.wall_time}};
}

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  const auto path = dir / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& dir, const std::string& name, const nlohmann::json& j) {
  write_file(dir, name, j.dump(2) + "\n");
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ',';
    out += header[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::logic_error("csv_table: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string scatter_svg(std::span<const std::array<double, 2>> points, double reference_radius, bool quarter,
                        const std::string& title) {
  constexpr double size = 800.0;
  const double extent = 1.2 * reference_radius;
  const double lo = quarter ? 0.0 : -extent;
  const double scale = size / (extent - lo);
  const auto sx = [&](double x) { return (x - lo) * scale; };
  const auto sy = [&](double y) { return size - (y - lo) * scale; };
  const auto f = [](double v) { return format_double(std::round(v * 1000.0) / 1000.0); };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
    << "  <title>" << title << "</title>\n"
    << "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n"
    << "  <line class=\"axis\" x1=\"" << f(sx(lo)) << "\" y1=\"" << f(sy(0)) << "\" x2=\"" << f(sx(extent))
    << "\" y2=\"" << f(sy(0)) << "\" stroke=\"#999\" stroke-width=\"1\"/>\n"
    << "  <line class=\"axis\" x1=\"" << f(sx(0)) << "\" y1=\"" << f(sy(lo)) << "\" x2=\"" << f(sx(0))
    << "\" y2=\"" << f(sy(extent)) << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  const double r = reference_radius * scale;
  if (quarter) {
    s << "  <path class=\"reference\" data-radius=\"" << format_double(reference_radius) << "\" d=\"M "
      << f(sx(reference_radius)) << ' ' << f(sy(0)) << " A " << f(r) << ' ' << f(r) << " 0 0 0 " << f(sx(0))
      << ' ' << f(sy(reference_radius)) << "\" fill=\"none\" stroke=\"#c33\" stroke-width=\"2\"/>\n";
  } else {
    s << "  <circle class=\"reference\" data-radius=\"" << format_double(reference_radius) << "\" cx=\""
      << f(sx(0)) << "\" cy=\"" << f(sy(0)) << "\" r=\"" << f(r)
      << "\" fill=\"none\" stroke=\"#c33\" stroke-width=\"2\"/>\n";
  }
  for (const auto& p : points)
    s << "  <circle class=\"point\" cx=\"" << f(sx(p[0])) << "\" cy=\"" << f(sy(p[1]))
      << "\" r=\"3\" fill=\"#236\"/>\n";
  s << "</svg>\n";
  return s.str();
}

std::vector<std::array<double, 2>> as_planar(const SkewSpectrum& s) {
  std::vector<std::array<double, 2>> out;
  out.reserve(s.size());
  for (const auto& z : s.points()) out.push_back({z.x, z.y});
  return out;
}

}  // namespace skewspec::cli
