#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "qtrack/report.hpp"

namespace qtrack {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 190, kTop = 40, kBottom = 60;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const std::string& title, const std::string& y_label) {
  double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin;
  double lmin = kmin, lmax = -kmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.k.size() && i < s.value.size(); ++i) {
      kmin = std::min(kmin, s.k[i]);
      kmax = std::max(kmax, s.k[i]);
      if (s.value[i] > 0.0) {
        lmin = std::min(lmin, std::log10(s.value[i]));
        lmax = std::max(lmax, std::log10(s.value[i]));
      }
    }
  }
  if (!std::isfinite(kmin)) kmin = 0, kmax = 1;
  if (kmax <= kmin) kmax = kmin + 1;
  if (!std::isfinite(lmin)) lmin = -1, lmax = 0;
  lmin = std::floor(lmin);
  lmax = std::ceil(lmax);
  if (lmax <= lmin) lmax = lmin + 1;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double k) { return kLeft + (k - kmin) / (kmax - kmin) * pw; };
  auto py = [&](double l) { return kTop + (lmax - l) / (lmax - lmin) * ph; };

  std::ostringstream o;
  o << std::fixed << std::setprecision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";

  // y decades; thin them out when the range is wide.
  const int decades = static_cast<int>(lmax - lmin);
  const int step = std::max(1, decades / 10);
  for (int e = static_cast<int>(lmin); e <= static_cast<int>(lmax); e += step) {
    const double y = py(e);
    o << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
      << "\" stroke=\"#e0e0e0\"/>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double k = kmin + (kmax - kmin) * t / 5.0;
    const double x = px(k);
    o << "<line x1=\"" << x << "\" y1=\"" << kTop + ph << "\" x2=\"" << x << "\" y2=\"" << kTop + ph + 5
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
      << static_cast<long long>(std::llround(k)) << "</text>\n";
  }
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">iteration k</text>\n";
  o << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPalette.size()];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].k.size() && i < series[s].value.size(); ++i) {
      if (!(series[s].value[i] > 0.0)) continue;
      o << px(series[s].k[i]) << ',' << py(std::log10(series[s].value[i])) << ' ';
    }
    o << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 36 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">" << escape(series[s].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace qtrack
