#include "terranav/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "terranav/errors.hpp"
#include "terranav/rng.hpp"

namespace terranav {

namespace {

constexpr const char* kHeader = "terranav-scenario v1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

[[noreturn]] void parse_fail(const std::string& origin, int line_no,
                             const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
}

// Parses "key=value key=value ..." after the primitive tag.
std::map<std::string, double> parse_fields(std::istringstream& ls,
                                           const std::string& origin,
                                           int line_no) {
  std::map<std::string, double> fields;
  std::string tok;
  while (ls >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      parse_fail(origin, line_no, "expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    char* end = nullptr;
    const double val = std::strtod(tok.c_str() + eq + 1, &end);
    if (end == tok.c_str() + eq + 1 || *end != '\0')
      parse_fail(origin, line_no, "bad number in '" + tok + "'");
    fields[key] = val;
  }
  return fields;
}

double need(const std::map<std::string, double>& fields, const char* key,
            const std::string& origin, int line_no) {
  const auto it = fields.find(key);
  if (it == fields.end())
    parse_fail(origin, line_no, std::string("missing field '") + key + "'");
  return it->second;
}

}  // namespace

TerrainField scenario_from_string(const std::string& text,
                                  const std::string& origin) {
  std::istringstream is(text);
  TerrainField field;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' ||
                             line.back() == '\t'))
      line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kHeader)
        parse_fail(origin, line_no,
                   std::string("expected header '") + kHeader + "'");
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "base_height") {
      if (!(ls >> field.base_height))
        parse_fail(origin, line_no, "base_height needs a value");
    } else if (tag == "seed") {
      long long s = 0;
      if (!(ls >> s)) parse_fail(origin, line_no, "seed needs an integer");
      field.rng_seed = static_cast<std::uint64_t>(s);
    } else if (tag == "gaussian_hill") {
      const auto f = parse_fields(ls, origin, line_no);
      GaussianHill h;
      h.center = {need(f, "cx", origin, line_no), need(f, "cy", origin, line_no)};
      h.amplitude = need(f, "amplitude", origin, line_no);
      h.spread = need(f, "spread", origin, line_no);
      if (!(h.spread > 0.0)) parse_fail(origin, line_no, "spread must be > 0");
      field.primitives.emplace_back(h);
    } else if (tag == "ridge") {
      const auto f = parse_fields(ls, origin, line_no);
      Ridge r;
      r.a = {need(f, "x1", origin, line_no), need(f, "y1", origin, line_no)};
      r.b = {need(f, "x2", origin, line_no), need(f, "y2", origin, line_no)};
      r.height = need(f, "height", origin, line_no);
      r.width = need(f, "width", origin, line_no);
      if (!(r.width > 0.0)) parse_fail(origin, line_no, "width must be > 0");
      field.primitives.emplace_back(r);
    } else if (tag == "step") {
      const auto f = parse_fields(ls, origin, line_no);
      Step s;
      s.boundary_point = {need(f, "px", origin, line_no),
                          need(f, "py", origin, line_no)};
      s.normal = {need(f, "nx", origin, line_no), need(f, "ny", origin, line_no)};
      const double n = s.normal.norm();
      if (!(n > 0.0)) parse_fail(origin, line_no, "normal must be nonzero");
      s.normal /= n;
      s.rise = need(f, "rise", origin, line_no);
      field.primitives.emplace_back(s);
    } else if (tag == "plane") {
      const auto f = parse_fields(ls, origin, line_no);
      Plane p;
      p.gradient = {need(f, "gx", origin, line_no), need(f, "gy", origin, line_no)};
      field.primitives.emplace_back(p);
    } else {
      parse_fail(origin, line_no, "unknown primitive '" + tag + "'");
    }
  }
  if (!header_seen) parse_fail(origin, 1, "empty scenario");
  return field;
}

TerrainField read_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open scenario: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return scenario_from_string(buf.str(), path);
}

std::string scenario_to_string(const TerrainField& field) {
  std::ostringstream os;
  os << kHeader << "\n";
  os << "base_height " << fmt(field.base_height) << "\n";
  os << "seed " << field.rng_seed << "\n";
  for (const auto& prim : field.primitives) {
    if (const auto* h = std::get_if<GaussianHill>(&prim)) {
      os << "gaussian_hill cx=" << fmt(h->center.x())
         << " cy=" << fmt(h->center.y()) << " amplitude=" << fmt(h->amplitude)
         << " spread=" << fmt(h->spread) << "\n";
    } else if (const auto* r = std::get_if<Ridge>(&prim)) {
      os << "ridge x1=" << fmt(r->a.x()) << " y1=" << fmt(r->a.y())
         << " x2=" << fmt(r->b.x()) << " y2=" << fmt(r->b.y())
         << " height=" << fmt(r->height) << " width=" << fmt(r->width) << "\n";
    } else if (const auto* s = std::get_if<Step>(&prim)) {
      os << "step px=" << fmt(s->boundary_point.x())
         << " py=" << fmt(s->boundary_point.y()) << " nx=" << fmt(s->normal.x())
         << " ny=" << fmt(s->normal.y()) << " rise=" << fmt(s->rise) << "\n";
    } else if (const auto* p = std::get_if<Plane>(&prim)) {
      os << "plane gx=" << fmt(p->gradient.x()) << " gy=" << fmt(p->gradient.y())
         << "\n";
    }
  }
  return os.str();
}

void write_scenario(const TerrainField& field, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os << scenario_to_string(field);
}

TerrainField make_preset(const std::string& name, std::uint64_t seed) {
  TerrainField field;
  field.rng_seed = seed;
  Rng rng(mix_seed(seed, 0xC0FFEE));

  if (name == "flat") {
    return field;
  }

  if (name == "hill-course") {
    // One impassable peak on the start-goal line (origin), gentle hills in a
    // ring around it. Peak max slope atan(4/(2*sqrt(e))) ~ 0.88 rad.
    GaussianHill peak;
    peak.center = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    peak.amplitude = 4.0;
    peak.spread = 2.0;
    field.primitives.emplace_back(peak);

    const int n_gentle = 3 + static_cast<int>(rng.uniform_index(3));  // 3..5 total hills
    for (int i = 0; i < n_gentle; ++i) {
      GaussianHill h;
      const double ang = rng.uniform(0.0, 2.0 * kPi);
      const double rad = rng.uniform(5.5, 8.5);
      h.center = {rad * std::cos(ang), rad * std::sin(ang)};
      h.amplitude = rng.uniform(0.25, 0.5);
      h.spread = rng.uniform(2.2, 3.0);
      field.primitives.emplace_back(h);
    }
    return field;
  }

  if (name == "ridge-valley") {
    // Two ridge walls crossing the x axis, each split into two segments with
    // a saddle gap; gap centers are seeded but kept near the course so every
    // trial has a passable route. height/width = 1 gives a crest-flank slope
    // of atan(1/sqrt(e)) ~ 0.545 rad.
    const double wall_x[2] = {-3.0, 3.0};
    for (int w = 0; w < 2; ++w) {
      const double gap_center = rng.uniform(-3.0, 3.0);
      const double gap_half = rng.uniform(1.8, 2.4);
      const double height = rng.uniform(1.1, 1.3);
      const double width = height;  // keeps max slope in the 0.5 rad band
      Ridge upper, lower;
      lower.a = {wall_x[w], -12.0};
      lower.b = {wall_x[w], gap_center - gap_half};
      upper.a = {wall_x[w], gap_center + gap_half};
      upper.b = {wall_x[w], 12.0};
      lower.height = upper.height = height;
      lower.width = upper.width = width;
      field.primitives.emplace_back(lower);
      field.primitives.emplace_back(upper);
    }
    // Mild undulation off the course.
    for (int i = 0; i < 3; ++i) {
      GaussianHill h;
      h.center = {rng.uniform(-9.0, 9.0), rng.uniform(4.0, 9.0) *
                                              (rng.uniform() < 0.5 ? -1.0 : 1.0)};
      h.amplitude = rng.uniform(0.2, 0.35);
      h.spread = rng.uniform(2.5, 3.5);
      field.primitives.emplace_back(h);
    }
    return field;
  }

  throw ConfigError("unknown preset '" + name +
                    "' (expected flat, hill-course, ridge-valley)");
}

}  // namespace terranav
