#include "esdsim/plot.hpp"

#include <algorithm>
#include <cstdio>

#include "esdsim/errors.hpp"

namespace esd::io {

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 64.0, kRight = 704.0, kTop = 32.0, kBottom = 432.0;
constexpr char kSystemColor[] = "#1f77b4";
constexpr char kEnvironmentColor[] = "#ff7f0e";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2g", v);
  return buf;
}

}  // namespace

std::string render_series_svg(const std::vector<SeriesRow>& rows,
                              const ent::InitialState& init,
                              const std::string& title) {
  if (rows.empty()) throw IoError("nothing to plot");
  const double xmin = rows.front().gamma_t;
  double xmax = rows.back().gamma_t;
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  const double ymin = 0.0, ymax = 1.05;

  const auto sx = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft);
  };
  const auto sy = [&](double y) {
    return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" "
         "height=\"480\" viewBox=\"0 0 720 480\">\n";
  svg += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"20\" "
         "font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
         title + "</text>\n";

  // frame
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
         num(kRight - kLeft) + "\" height=\"" + num(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks
  for (int i = 0; i <= 6; ++i) {
    const double x = xmin + (xmax - xmin) * i / 6.0;
    const double px = sx(x);
    svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(kBottom) + "\" x2=\"" +
           num(px) + "\" y2=\"" + num(kBottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(px) + "\" y=\"" + num(kBottom + 20) +
           "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">" + tick_label(x) + "</text>\n";
  }
  svg += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"" +
         num(kHeight - 10) +
         "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">damping time (gamma t)</text>\n";

  // y ticks
  for (int i = 0; i <= 5; ++i) {
    const double y = 0.2 * i;
    const double py = sy(y);
    svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py) + "\" x2=\"" +
           num(kLeft) + "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(kLeft - 9) + "\" y=\"" + num(py + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"end\">" + tick_label(y) + "</text>\n";
  }
  svg += "<text x=\"16\" y=\"" + num((kTop + kBottom) / 2) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
         " transform=\"rotate(-90 16 " + num((kTop + kBottom) / 2) +
         ")\">concurrence</text>\n";

  // closed-form curves
  for (const bool system : {true, false}) {
    std::string points;
    for (int i = 0; i <= 256; ++i) {
      const double gt = xmin + (xmax - xmin) * i / 256.0;
      const double c = system
                           ? ent::closed_concurrence_system(init, gt)
                           : ent::closed_concurrence_environment(init, gt);
      points += num(sx(gt)) + "," + num(sy(c)) + " ";
    }
    points.pop_back();
    svg += std::string("<polyline fill=\"none\" stroke=\"") +
           (system ? kSystemColor : kEnvironmentColor) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
  }

  // measured points with error bars
  for (const SeriesRow& r : rows) {
    struct {
      double mean, err;
      const char* color;
    } series[2] = {{r.c_sys_mean, r.c_sys_stderr, kSystemColor},
                   {r.c_env_mean, r.c_env_stderr, kEnvironmentColor}};
    for (const auto& s : series) {
      const double px = sx(r.gamma_t);
      const double lo = std::clamp(s.mean - s.err, ymin, ymax);
      const double hi = std::clamp(s.mean + s.err, ymin, ymax);
      svg += std::string("<line x1=\"") + num(px) + "\" y1=\"" + num(sy(lo)) +
             "\" x2=\"" + num(px) + "\" y2=\"" + num(sy(hi)) + "\" stroke=\"" +
             s.color + "\"/>\n";
      svg += std::string("<circle cx=\"") + num(px) + "\" cy=\"" +
             num(sy(std::clamp(s.mean, ymin, ymax))) + "\" r=\"3\" fill=\"" +
             s.color + "\"/>\n";
    }
  }

  // legend
  const double lx = kRight - 190.0, ly = kTop + 12.0;
  svg += "<rect x=\"" + num(lx - 8) + "\" y=\"" + num(ly - 12) +
         "\" width=\"190\" height=\"44\" fill=\"white\" stroke=\"black\"/>\n";
  const char* names[2] = {"system pair", "environment pair"};
  const char* colors[2] = {kSystemColor, kEnvironmentColor};
  for (int i = 0; i < 2; ++i) {
    const double y = ly + 18.0 * i;
    svg += std::string("<line x1=\"") + num(lx) + "\" y1=\"" + num(y) +
           "\" x2=\"" + num(lx + 26) + "\" y2=\"" + num(y) + "\" stroke=\"" +
           colors[i] + "\" stroke-width=\"1.5\"/>\n";
    svg += std::string("<circle cx=\"") + num(lx + 13) + "\" cy=\"" + num(y) +
           "\" r=\"3\" fill=\"" + colors[i] + "\"/>\n";
    svg += std::string("<text x=\"") + num(lx + 34) + "\" y=\"" + num(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + names[i] +
           "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace esd::io
