#include "omnimod/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace omnimod
{

namespace
{

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string label(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string escape(const std::string& s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range
{
  double lo{std::numeric_limits<double>::infinity()};
  double hi{-std::numeric_limits<double>::infinity()};

  void add(double v)
  {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void pad()
  {
    if (!(hi > lo))
    {
      const double c = std::isfinite(lo) ? lo : 0.0;
      lo = c - 0.5;
      hi = c + 0.5;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

/// Maps data coordinates into a pixel box with y pointing up.
struct Frame
{
  double x0, y0, w, h;
  Range xr, yr;

  double px(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
  double py(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }

  void axes(std::ostringstream& os, const std::string& title, const std::string& xlabel,
            const std::string& ylabel) const
  {
    os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(w)
       << "\" height=\"" << fmt(h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << fmt(x0 + w / 2) << "\" y=\"" << fmt(y0 - 6)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(title) << "</text>\n";
    os << "<text x=\"" << fmt(x0 + w / 2) << "\" y=\"" << fmt(y0 + h + 28)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << escape(xlabel) << "</text>\n";
    os << "<text x=\"" << fmt(x0 - 38) << "\" y=\"" << fmt(y0 + h / 2)
       << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 " << fmt(x0 - 38)
       << ' ' << fmt(y0 + h / 2) << ")\">" << escape(ylabel) << "</text>\n";
    for (double f : {0.0, 0.5, 1.0})
    {
      const double xv = xr.lo + f * (xr.hi - xr.lo);
      const double yv = yr.lo + f * (yr.hi - yr.lo);
      os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(y0 + h + 13)
         << "\" text-anchor=\"middle\" font-size=\"9\">" << label(xv) << "</text>\n";
      os << "<text x=\"" << fmt(x0 - 4) << "\" y=\"" << fmt(py(yv) + 3)
         << "\" text-anchor=\"end\" font-size=\"9\">" << label(yv) << "</text>\n";
    }
  }
};

std::string svg_open(int width, int height)
{
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

}  // namespace

std::string render_trace_svg(const ScenarioTrace& trace)
{
  std::ostringstream os;
  os << svg_open(960, 560);

  Frame xy{60, 40, 440, 440, {}, {}};
  for (const auto& r : trace.rows)
  {
    xy.xr.add(r.pose.x);
    xy.xr.add(r.reference.x);
    xy.yr.add(r.pose.y);
    xy.yr.add(r.reference.y);
  }
  xy.xr.pad();
  xy.yr.pad();
  // equal aspect
  const double span = std::max(xy.xr.hi - xy.xr.lo, xy.yr.hi - xy.yr.lo);
  for (Range* r : {&xy.xr, &xy.yr})
  {
    const double c = 0.5 * (r->lo + r->hi);
    r->lo = c - span / 2;
    r->hi = c + span / 2;
  }
  xy.axes(os, "trajectory: " + trace.name, "x [m]", "y [m]");

  auto path_d = [&](auto get) {
    std::string d;
    for (std::size_t i = 0; i < trace.rows.size(); ++i)
    {
      const Pose2D p = get(trace.rows[i]);
      d += (i ? " L" : "M") + fmt(xy.px(p.x)) + ' ' + fmt(xy.py(p.y));
    }
    return d;
  };
  os << "<path id=\"reference\" d=\"" << path_d([](const TraceRow& r) { return r.reference; })
     << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
  os << "<path id=\"actual\" d=\"" << path_d([](const TraceRow& r) { return r.pose; })
     << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
  os << "<text x=\"70\" y=\"500\" font-size=\"11\" fill=\"#888\">reference (dashed)</text>\n";
  os << "<text x=\"200\" y=\"500\" font-size=\"11\" fill=\"#1f77b4\">actual (solid)</text>\n";

  struct Axis
  {
    const char* title;
    const char* unit;
    double TrackingError::*member;
  };
  const Axis axes[] = {{"x error", "m", &TrackingError::e_x},
                       {"y error", "m", &TrackingError::e_y},
                       {"heading error", "rad", &TrackingError::e_theta}};
  for (std::size_t a = 0; a < 3; ++a)
  {
    Frame f{600, 40 + 170.0 * static_cast<double>(a), 330, 120, {}, {}};
    for (const auto& r : trace.rows)
    {
      f.xr.add(r.t);
      f.yr.add(r.error.*(axes[a].member));
    }
    f.xr.pad();
    f.yr.pad();
    f.axes(os, axes[a].title, "t [s]", axes[a].unit);
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[a] << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < trace.rows.size(); ++i)
      os << (i ? " " : "") << fmt(f.px(trace.rows[i].t)) << ','
         << fmt(f.py(trace.rows[i].error.*(axes[a].member)));
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_energy_svg(const std::vector<EnergySeries>& series)
{
  std::ostringstream os;
  os << svg_open(760, 480);
  Frame f{80, 40, 460, 380, {}, {}};
  for (const auto& s : series)
  {
    for (double t : s.t)
      f.xr.add(t);
    for (double e : s.cumulative)
      f.yr.add(e);
  }
  f.xr.pad();
  f.yr.pad();
  f.axes(os, "cumulative energy", "t [s]", "sum of omega^2 dt [rad^2/s]");

  for (std::size_t k = 0; k < series.size(); ++k)
  {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\""
       << (s.rank == 1 ? "2.5" : "1.5") << "\" points=\"";
    for (std::size_t i = 0; i < s.t.size(); ++i)
      os << (i ? " " : "") << fmt(f.px(s.t[i])) << ',' << fmt(f.py(s.cumulative[i]));
    os << "\"/>\n";
    const double ly = 60 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"560\" y1=\"" << fmt(ly) << "\" x2=\"585\" y2=\"" << fmt(ly)
       << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"592\" y=\"" << fmt(ly + 4) << "\" font-size=\"11\">" << escape(s.name)
       << (s.rank == 1 ? " (rank 1)" : "") << "</text>\n";
    if (s.rank == 1 && !s.t.empty())
      os << "<text x=\"" << fmt(f.px(s.t.back()) - 4) << "\" y=\"" << fmt(f.py(s.cumulative.back()) + 14)
         << "\" text-anchor=\"end\" font-size=\"11\" font-weight=\"bold\">rank 1</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace omnimod
