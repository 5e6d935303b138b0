#include "mixflow/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mixflow/io.hpp"

namespace mixflow {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 560;
constexpr double kLeft = 72, kRight = 30, kTop = 46, kBottom = 64;
constexpr const char* kMotorcycleColor = "#d62728";
constexpr const char* kCarColor = "#1f77b4";

double plot_w() { return kWidth - kLeft - kRight; }
double plot_h() { return kHeight - kTop - kBottom; }

std::string num(double v) {
  // Fixed short form for pixel coordinates.
  std::ostringstream s;
  s.precision(2);
  s << std::fixed << v;
  return s.str();
}

struct Series {
  std::string name;
  std::string color;
  const std::vector<double>* y = nullptr;
};

void svg_open(std::ostringstream& s, const std::string& title) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
    << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
    << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void axes(std::ostringstream& s, double x_max, double y_max, const std::string& x_label,
          const std::string& y_label) {
  double x0 = kLeft, y0 = kHeight - kBottom;
  s << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0 + plot_w())
    << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
    << "\" y2=\"" << num(kTop) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double fx = x0 + plot_w() * i / 5.0;
    double fy = y0 - plot_h() * i / 5.0;
    s << "<line x1=\"" << num(fx) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(fx)
      << "\" y2=\"" << num(y0 + 5) << "\" stroke=\"black\"/>\n"
      << "<text class=\"xtick\" x=\"" << num(fx) << "\" y=\"" << num(y0 + 20)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(x_max * i / 5.0) << "</text>\n";
    s << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(fy) << "\" x2=\"" << num(x0)
      << "\" y2=\"" << num(fy) << "\" stroke=\"black\"/>\n"
      << "<text class=\"ytick\" x=\"" << num(x0 - 8) << "\" y=\"" << num(fy + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(std::round(y_max * i / 5.0 * 1e6) / 1e6) << "</text>\n";
  }
  s << "<text x=\"" << num(x0 + plot_w() / 2) << "\" y=\"" << num(kHeight - 18)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
    << "</text>\n";
  s << "<text x=\"20\" y=\"" << num(kTop + plot_h() / 2)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
    << "transform=\"rotate(-90 20 " << num(kTop + plot_h() / 2) << ")\">" << y_label
    << "</text>\n";
}

void write_file(const std::filesystem::path& file, const std::string& body) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << body;
}

std::filesystem::path profile_plot(const std::filesystem::path& dir, const std::string& stem,
                                   const std::string& title, const std::vector<double>& x,
                                   double x_max, double y_max, const std::string& x_label,
                                   const std::string& y_label,
                                   const std::vector<Series>& series) {
  std::ostringstream s;
  svg_open(s, title);
  axes(s, x_max, y_max, x_label, y_label);
  double x0 = kLeft, y0 = kHeight - kBottom;
  for (const auto& ser : series) {
    s << "<polyline fill=\"none\" stroke=\"" << ser.color << "\" stroke-width=\"2\" points=\"";
    for (size_t j = 0; j < x.size(); ++j) {
      double px = x0 + (x[j] / x_max) * plot_w();
      double py = y0 - ((*ser.y)[j] / y_max) * plot_h();
      s << num(px) << ',' << num(py) << ' ';
    }
    s << "\"/>\n";
  }
  double lx = kLeft + 12, ly = kTop + 8;
  for (const auto& ser : series) {
    s << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly + 4) << "\" x2=\"" << num(lx + 24)
      << "\" y2=\"" << num(ly + 4) << "\" stroke=\"" << ser.color << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 8)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << ser.name << "</text>\n";
    ly += 18;
  }
  s << "</svg>\n";
  auto file = dir / (stem + ".svg");
  write_file(file, s.str());
  return file;
}

std::array<int, 3> colormap(double t) {
  static constexpr std::array<std::array<int, 3>, 10> stops{{{68, 1, 84},
                                                             {72, 40, 120},
                                                             {62, 74, 137},
                                                             {49, 104, 142},
                                                             {38, 130, 142},
                                                             {31, 158, 137},
                                                             {53, 183, 121},
                                                             {109, 205, 89},
                                                             {180, 222, 44},
                                                             {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  size_t i = std::min(static_cast<size_t>(t), stops.size() - 2);
  double f = t - static_cast<double>(i);
  std::array<int, 3> out{};
  for (int ch = 0; ch < 3; ++ch)
    out[static_cast<size_t>(ch)] = static_cast<int>(std::lround(
        stops[i][static_cast<size_t>(ch)] +
        f * (stops[i + 1][static_cast<size_t>(ch)] - stops[i][static_cast<size_t>(ch)])));
  return out;
}

std::filesystem::path heatmap_plot(const std::filesystem::path& dir, const std::string& stem,
                                   const std::string& title, const SimulationTrace& t,
                                   VehicleClass cls, bool velocity) {
  std::ostringstream s;
  svg_open(s, title);
  size_t rows = t.snapshots.size();
  size_t cols = t.x.size();
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (const auto& snap : t.snapshots)
    for (const auto& w : snap.cells) {
      double v = velocity ? w.v[cls] : w.rho[cls];
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  double span = vmax - vmin;
  double x0 = kLeft, y_top = kTop;
  double cw = plot_w() / static_cast<double>(cols);
  double ch = plot_h() / static_cast<double>(rows);
  for (size_t row = 0; row < rows; ++row) {
    // Earliest snapshot on the bottom row.
    const auto& snap = t.snapshots[row];
    double ry = y_top + plot_h() - ch * static_cast<double>(row + 1);
    for (size_t col = 0; col < cols; ++col) {
      double v = velocity ? snap.cells[col].v[cls] : snap.cells[col].rho[cls];
      auto rgb = colormap(span > 0 ? (v - vmin) / span : 0.5);
      s << "<rect x=\"" << num(x0 + cw * static_cast<double>(col)) << "\" y=\"" << num(ry)
        << "\" width=\"" << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5)
        << "\" fill=\"rgb(" << rgb[0] << ',' << rgb[1] << ',' << rgb[2] << ")\"/>\n";
    }
    s << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(ry + ch / 2 + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">t="
      << format_double(snap.time) << "</text>\n";
  }
  double road = t.config.road.length;
  double y0 = y_top + plot_h();
  for (int i = 0; i <= 5; ++i) {
    double fx = x0 + plot_w() * i / 5.0;
    s << "<text class=\"xtick\" x=\"" << num(fx) << "\" y=\"" << num(y0 + 20)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(road * i / 5.0) << "</text>\n";
  }
  s << "<text x=\"" << num(x0 + plot_w() / 2) << "\" y=\"" << num(kHeight - 18)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">position (m)"
    << "</text>\n";
  s << "<text x=\"" << num(x0) << "\" y=\"" << num(kTop - 8)
    << "\" font-family=\"sans-serif\" font-size=\"11\">range " << format_double(vmin)
    << " to " << format_double(vmax) << "</text>\n";
  s << "</svg>\n";
  auto file = dir / (stem + ".svg");
  write_file(file, s.str());
  return file;
}

}  // namespace

std::vector<std::filesystem::path> render_plots(const SimulationTrace& t,
                                                const std::filesystem::path& out_dir) {
  if (t.snapshots.empty()) throw NoDataError("trace has no snapshots to plot");
  std::filesystem::create_directories(out_dir);

  std::vector<std::filesystem::path> files;
  double road = t.config.road.length;
  double v_cap = t.config.classes.car.v_max;

  for (const auto& snap : t.snapshots) {
    auto rho_m = std::vector<double>(), v_m = std::vector<double>(),
         rho_c = std::vector<double>(), v_c = std::vector<double>();
    for (const auto& w : snap.cells) {
      rho_m.push_back(w.rho.motorcycle);
      v_m.push_back(w.v.motorcycle);
      rho_c.push_back(w.rho.car);
      v_c.push_back(w.v.car);
    }
    double rho_max = 0, v_max = v_cap;
    for (size_t j = 0; j < rho_m.size(); ++j) {
      rho_max = std::max(rho_max, std::max(rho_m[j], rho_c[j]));
      v_max = std::max(v_max, std::max(v_m[j], v_c[j]));
    }
    std::string label = format_double(snap.time);
    files.push_back(profile_plot(
        out_dir, "density_t" + label, "density at t=" + label + " s", t.x, road,
        std::max(rho_max, 1e-12) * 1.05, "position (m)", "density",
        {{"motorcycles", kMotorcycleColor, &rho_m}, {"cars", kCarColor, &rho_c}}));
    files.push_back(profile_plot(
        out_dir, "velocity_t" + label, "velocity at t=" + label + " s", t.x, road,
        v_max * 1.05, "position (m)", "velocity (m/s)",
        {{"motorcycles", kMotorcycleColor, &v_m}, {"cars", kCarColor, &v_c}}));
  }

  files.push_back(heatmap_plot(out_dir, "heatmap_density_motorcycle",
                               "motorcycle density over time", t, VehicleClass::motorcycle,
                               false));
  files.push_back(heatmap_plot(out_dir, "heatmap_density_car", "car density over time", t,
                               VehicleClass::car, false));
  files.push_back(heatmap_plot(out_dir, "heatmap_velocity_motorcycle",
                               "motorcycle velocity over time", t, VehicleClass::motorcycle,
                               true));
  files.push_back(heatmap_plot(out_dir, "heatmap_velocity_car", "car velocity over time", t,
                               VehicleClass::car, true));
  return files;
}

}  // namespace mixflow
