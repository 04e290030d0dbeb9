#include "selbias/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "selbias/errors.hpp"

namespace selbias {

namespace {

/// Fixed two-decimal pixel coordinates keep the output stable for golden
/// comparisons.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Tick label without trailing zeros.
std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Scale {
  double lo, hi, pix_lo, pix_hi;  // pix grows toward hi
  double operator()(double v) const {
    return pix_lo + (v - lo) / (hi - lo) * (pix_hi - pix_lo);
  }
};

/// A round step (1, 2 or 5 times a power of ten) splitting range into ~n ticks.
double nice_step(double range, int n) {
  const double raw = range / n;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step;
  if (frac <= 1.0) step = 1.0;
  else if (frac <= 2.0) step = 2.0;
  else if (frac <= 5.0) step = 5.0;
  else step = 10.0;
  return step * mag;
}

}  // namespace

std::string render_figure_svg(const std::vector<SweepRow>& rows,
                              double true_ratio, const SvgOptions& opts) {
  if (rows.size() < 2) {
    throw DataError("render_figure_svg: need at least 2 rows");
  }

  const double W = opts.width;
  const double H = opts.height;
  const double ml = 78.0, mr = 24.0, mt = 30.0, mb = 62.0;

  // Everything on the y axis is annual progress in percent.
  const double true_pct = 100.0 * true_ratio;
  double ymin = true_pct, ymax = true_pct;
  double xmin = rows.front().rho, xmax = rows.back().rho;
  auto widen = [&](double v) {
    if (!std::isfinite(v)) return;
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  };
  for (const auto& r : rows) {
    widen(100.0 * (r.median_ratio - r.sd_ratio));
    widen(100.0 * (r.median_ratio + r.sd_ratio));
    widen(100.0 * r.plim_ratio);
  }
  if (ymax - ymin < 1e-9) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double ypad = 0.08 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const Scale sx{xmin, xmax, ml, W - mr};
  const Scale sy{ymin, ymax, H - mb, mt};

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(W) +
         "\" height=\"" + px(H) + "\" viewBox=\"0 0 " + px(W) + " " + px(H) +
         "\">\n";
  svg += "<title>Estimated annual progress vs correlation of latent quality "
         "with log dataset size</title>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + px(W) + "\" height=\"" + px(H) +
         "\" fill=\"white\"/>\n";

  // axes
  svg += "<g stroke=\"#333\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(H - mb) + "\" x2=\"" +
         px(W - mr) + "\" y2=\"" + px(H - mb) + "\"/>\n";
  svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(ml) +
         "\" y2=\"" + px(H - mb) + "\"/>\n";
  svg += "</g>\n";

  // x ticks at the grid points themselves (thinned when the grid is dense)
  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" "
         "text-anchor=\"middle\">\n";
  const std::size_t stride = rows.size() > 21 ? (rows.size() + 20) / 21 : 1;
  for (std::size_t i = 0; i < rows.size(); i += stride) {
    const double x = sx(rows[i].rho);
    svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(H - mb) + "\" x2=\"" + px(x) +
           "\" y2=\"" + px(H - mb + 4) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + px(x) + "\" y=\"" + px(H - mb + 17) + "\">" +
           tick_label(rows[i].rho) + "</text>\n";
  }
  svg += "</g>\n";

  // y ticks
  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" "
         "text-anchor=\"end\">\n";
  const double ystep = nice_step(ymax - ymin, 6);
  for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax + 1e-9; v += ystep) {
    const double y = sy(v);
    svg += "<line x1=\"" + px(ml - 4) + "\" y1=\"" + px(y) + "\" x2=\"" + px(ml) +
           "\" y2=\"" + px(y) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + px(ml - 7) + "\" y=\"" + px(y + 4) + "\">" +
           tick_label(v) + "</text>\n";
  }
  svg += "</g>\n";

  // axis titles
  svg += "<text font-family=\"sans-serif\" font-size=\"13\" fill=\"#111\" "
         "text-anchor=\"middle\" x=\"" + px((ml + W - mr) / 2) + "\" y=\"" +
         px(H - 16) + "\">target correlation rho (latent quality vs residual "
         "ln D)</text>\n";
  svg += "<text font-family=\"sans-serif\" font-size=\"13\" fill=\"#111\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         px((mt + H - mb) / 2) + ")\" x=\"18\" y=\"" + px((mt + H - mb) / 2) +
         "\">estimated annual progress (%)</text>\n";

  // +-1 sd band around the median
  std::string upper, lower;
  std::size_t band_pts = 0;
  for (const auto& r : rows) {
    if (!std::isfinite(r.median_ratio) || !std::isfinite(r.sd_ratio)) continue;
    const double x = sx(r.rho);
    upper += (band_pts ? " L " : "M ") + px(x) + " " +
             px(sy(100.0 * (r.median_ratio + r.sd_ratio)));
    lower = " L " + px(x) + " " + px(sy(100.0 * (r.median_ratio - r.sd_ratio))) +
            lower;
    ++band_pts;
  }
  if (band_pts >= 2) {
    svg += "<path class=\"band\" d=\"" + upper + lower +
           " Z\" fill=\"#9ecae1\" fill-opacity=\"0.35\" stroke=\"none\"/>\n";
  }

  auto polyline = [&](const char* cls, const char* style,
                      auto value_of) {
    std::string pts;
    std::size_t count = 0;
    for (const auto& r : rows) {
      const double v = value_of(r);
      if (!std::isfinite(v)) continue;
      if (count) pts += ' ';
      pts += px(sx(r.rho)) + "," + px(sy(100.0 * v));
      ++count;
    }
    if (count >= 2) {
      svg += std::string("<polyline class=\"") + cls + "\" points=\"" + pts +
             "\" fill=\"none\" " + style + "/>\n";
    }
  };

  polyline("plim-line", "stroke=\"#d95f02\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6 4\"",
           [](const SweepRow& r) { return r.plim_ratio; });
  polyline("median-line", "stroke=\"#1f77b4\" stroke-width=\"2\"",
           [](const SweepRow& r) { return r.median_ratio; });

  // single reference line at the true rate
  svg += "<line class=\"ref-line\" x1=\"" + px(ml) + "\" y1=\"" +
         px(sy(true_pct)) + "\" x2=\"" + px(W - mr) + "\" y2=\"" +
         px(sy(true_pct)) +
         "\" stroke=\"#555\" stroke-width=\"1\" stroke-dasharray=\"2 3\"/>\n";

  // legend
  const double lx = W - mr - 180, ly = mt + 8;
  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#111\">\n";
  svg += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly) + "\" x2=\"" + px(lx + 24) +
         "\" y2=\"" + px(ly) + "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  svg += "<text x=\"" + px(lx + 30) + "\" y=\"" + px(ly + 4) +
         "\">median estimate</text>\n";
  svg += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly + 16) + "\" x2=\"" +
         px(lx + 24) + "\" y2=\"" + px(ly + 16) +
         "\" stroke=\"#d95f02\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
  svg += "<text x=\"" + px(lx + 30) + "\" y=\"" + px(ly + 20) +
         "\">analytic limit</text>\n";
  svg += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly + 32) + "\" x2=\"" +
         px(lx + 24) + "\" y2=\"" + px(ly + 32) +
         "\" stroke=\"#555\" stroke-width=\"1\" stroke-dasharray=\"2 3\"/>\n";
  svg += "<text x=\"" + px(lx + 30) + "\" y=\"" + px(ly + 36) +
         "\">true rate</text>\n";
  svg += "</g>\n";

  svg += "</svg>\n";
  return svg;
}

void emit_figure_svg(const std::vector<SweepRow>& rows, double true_ratio,
                     const std::filesystem::path& path, const SvgOptions& opts) {
  const std::string svg = render_figure_svg(rows, true_ratio, opts);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << svg;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace selbias
