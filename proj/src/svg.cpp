#include <algorithm>
#include <charconv>
#include <cmath>

#include "splitweave/render.hpp"

namespace splitweave {

namespace {

class Writer {
 public:
  explicit Writer(int precision) : precision_(std::clamp(precision, 1, 6)) {}

  // Fixed-point with trailing zeros trimmed; "-0" prints as "0".
  std::string num(double v) const {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision_);
    std::string s(buf, res.ptr);
    if (s.find('.') != std::string::npos) {
      while (s.back() == '0') s.pop_back();
      if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
  }

  std::string pt(Vec2 p) const { return num(p.x) + " " + num(p.y); }

  std::string polygon_d(const Polygon& poly) const {
    std::string d;
    for (std::size_t i = 0; i < poly.size(); ++i) d += (i == 0 ? "M" : "L") + pt(poly[i]);
    return d + "Z";
  }

  // One arc command per corner.
  std::string rounded_d(const Polygon& poly, double radius) const {
    const std::size_t n = poly.size();
    std::vector<CornerFillet> corners;
    for (std::size_t i = 0; i < n; ++i)
      corners.push_back(corner_fillet(poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n], radius));
    std::string d = "M" + pt(corners[0].out);
    auto arc = [&](const CornerFillet& c) {
      d += "L" + pt(c.in) + "A" + num(c.radius) + " " + num(c.radius) + " 0 0 " + (c.convex ? "1 " : "0 ") + pt(c.out);
    };
    for (std::size_t i = 1; i < n; ++i) arc(corners[i]);
    arc(corners[0]);
    return d + "Z";
  }

  std::string path_d(const Polygon& poly, double radius) const {
    return radius > 0 ? rounded_d(poly, radius) : polygon_d(poly);
  }

 private:
  int precision_;
};

std::string def_id(const std::string& motif_id) {
  std::string out = "m-";
  for (char c : motif_id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
    out += ok ? c : '_';
  }
  return out;
}

std::string opacity_attr(const Writer& w, double opacity) {
  return opacity < 1 ? " opacity=\"" + w.num(opacity) + "\"" : "";
}

}  // namespace

std::string emit_svg(const SceneGraph& scene, const RenderOptions& opts) {
  Writer w(opts.precision);
  const std::string width = std::to_string(scene.canvas.width), height = std::to_string(scene.canvas.height);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg height=\"" + height + "\" version=\"1.1\" viewBox=\"0 0 " + width + " " + height + "\" width=\"" +
         width + "\" xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\">\n";
  if (!scene.defs.empty()) {
    out += "<defs>\n";
    for (const MotifDef& def : scene.defs) {
      std::string d;
      for (const Polygon& contour : def.contours) d += w.polygon_d(contour);
      out += "<path d=\"" + d + "\" fill-rule=\"evenodd\" id=\"" + def_id(def.id) + "\"/>\n";
    }
    out += "</defs>\n";
  }
  out += "<rect fill=\"" + scene.canvas.background.hex() + "\" height=\"" + height + "\" width=\"" + width +
         "\" x=\"0\" y=\"0\"/>\n";
  for (const SceneElement& el : scene.elements) {
    if (const auto* f = std::get_if<FilledPath>(&el)) {
      out += "<path d=\"" + w.path_d(f->polygon, f->corner_radius) + "\" fill=\"" + f->fill.hex() + "\"" +
             opacity_attr(w, f->opacity) + "/>\n";
    } else if (const auto* s = std::get_if<StrokedPath>(&el)) {
      out += "<path d=\"" + w.path_d(s->polygon, s->corner_radius) + "\" fill=\"none\"" +
             opacity_attr(w, s->opacity) + " stroke=\"" + s->stroke.hex() + "\" stroke-width=\"" + w.num(s->width) +
             "\"/>\n";
    } else {
      const auto& m = std::get<MotifInstance>(el);
      const Affine& t = m.transform;
      out += "<use" + (m.fill ? " fill=\"" + m.fill->hex() + "\"" : std::string{}) + opacity_attr(w, m.opacity) +
             " transform=\"matrix(" + w.num(t.a) + " " + w.num(t.b) + " " + w.num(t.c) + " " + w.num(t.d) + " " +
             w.num(t.e) + " " + w.num(t.f) + ")\" xlink:href=\"#" + def_id(m.motif_id) + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace splitweave
