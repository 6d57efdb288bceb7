#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <string>

#include "percmax/engine.hpp"

namespace percmax {

struct SvgOptions {
  int cell_px = 12;
  bool legend = true;
};

namespace detail {

// Nine samples of the viridis ramp.
inline constexpr std::array<const char*, 9> kRamp{"#440154", "#472d7b", "#3b528b", "#2c728e", "#21918c",
                                                  "#28ae80", "#5ec962", "#addc30", "#fde725"};

inline const char* ramp_color(std::int64_t t, std::int64_t tmax) {
  if (tmax <= 0) return kRamp.back();
  auto i = static_cast<std::size_t>(t * static_cast<std::int64_t>(kRamp.size() - 1) / tmax);
  return kRamp[std::min(i, kRamp.size() - 1)];
}

}  // namespace detail

/// Heatmap of infection times; never-infected cells are hatched. Row 1 is drawn at the bottom.
inline std::string render_svg(const InfectionReport<2>& rep, const SvgOptions& opt = {}) {
  const int k = rep.topology.dims[0], l = rep.topology.dims[1], px = opt.cell_px;
  std::int64_t tmax = 0;
  for (auto t : rep.times) tmax = std::max<std::int64_t>(tmax, t);
  const int legend_h = opt.legend ? 3 * px : 0;
  const int w = std::max(k * px, static_cast<int>(detail::kRamp.size()) * px + 8 * px), h = l * px + legend_h;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
     << w << ' ' << h << "\">\n";
  os << "<defs><pattern id=\"never\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
        "patternTransform=\"rotate(45)\"><rect width=\"6\" height=\"6\" fill=\"#ffffff\"/>"
        "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#888888\" stroke-width=\"3\"/></pattern></defs>\n";
  for (int y = 1; y <= l; ++y)
    for (int x = 1; x <= k; ++x) {
      std::int32_t t = rep.times[rep.topology.index(cell(x, y))];
      os << "<rect x=\"" << (x - 1) * px << "\" y=\"" << (l - y) * px << "\" width=\"" << px << "\" height=\"" << px
         << "\" fill=\"" << (t < 0 ? "url(#never)" : detail::ramp_color(t, tmax)) << "\"";
      if (t == 0) os << " stroke=\"#000000\" stroke-width=\"1\"";
      os << "><title>(" << x << "," << y << ") " << (t < 0 ? std::string("never") : std::to_string(t))
         << "</title></rect>\n";
    }
  if (opt.legend) {
    const int y0 = l * px + px / 2;
    for (std::size_t i = 0; i < detail::kRamp.size(); ++i)
      os << "<rect x=\"" << static_cast<int>(i) * px << "\" y=\"" << y0 << "\" width=\"" << px << "\" height=\"" << px
         << "\" fill=\"" << detail::kRamp[i] << "\"/>\n";
    os << "<text x=\"" << static_cast<int>(detail::kRamp.size()) * px + px / 2 << "\" y=\"" << y0 + px
       << "\" font-family=\"sans-serif\" font-size=\"" << px << "\">0 .. " << tmax << " (max time "
       << rep.total_time.to_string() << ")</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace percmax
