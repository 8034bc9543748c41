#include "frp/svg.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "frp/csv.hpp"

namespace frp::svg {

namespace {

constexpr const char* kHeader =
    "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" ";

std::string num(double v) { return format_double(v); }

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string histogram(const spectral::Histogram& h, const std::string& title) {
  constexpr double width = 640.0;
  constexpr double height = 400.0;
  constexpr double margin = 40.0;
  std::ostringstream out;
  out << kHeader << "width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\">\n";
  const std::string safe = escape(title);
  out << "<title>" << safe << "</title>\n";
  out << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << safe
      << "</text>\n";
  const std::size_t peak = h.counts.empty() ? 1 : std::max<std::size_t>(1, *std::max_element(h.counts.begin(), h.counts.end()));
  const double plot_w = width - 2 * margin;
  const double plot_h = height - 2 * margin;
  const double bar_w = h.counts.empty() ? 0.0 : plot_w / static_cast<double>(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double bh = plot_h * static_cast<double>(h.counts[i]) / static_cast<double>(peak);
    out << "<rect x=\"" << num(margin + bar_w * static_cast<double>(i)) << "\" y=\"" << num(height - margin - bh)
        << "\" width=\"" << num(bar_w) << "\" height=\"" << num(bh) << "\" fill=\"#4c72b0\"/>\n";
  }
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << margin << "\" y=\"" << height - 12 << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << num(h.lo) << "</text>\n";
  out << "<text x=\"" << width - margin << "\" y=\"" << height - 12
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << num(h.hi) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string disk(const std::vector<orbital::Arc>& arcs) {
  static constexpr std::array<const char*, 4> colours{"#c44e52", "#4c72b0", "#55a868", "#8172b2"};
  std::ostringstream out;
  out << kHeader << "width=\"600\" height=\"600\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n";
  out << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.005\"/>\n";
  for (const auto& a : arcs) {
    // y is negated for screen coordinates; the inner arc then sweeps
    // counter-clockwise on screen (sweep-flag 0).
    out << "<path d=\"M " << num(a.x1) << ' ' << num(-a.y1) << " A " << num(a.r) << ' ' << num(a.r) << " 0 0 0 "
        << num(a.x2) << ' ' << num(-a.y2) << "\" fill=\"none\" stroke=\"" << colours[(a.level - 1) % colours.size()]
        << "\" stroke-width=\"0.006\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace frp::svg
