#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "twistbench/catalog.hpp"
#include "twistbench/comgeo.hpp"
#include "twistbench/errors.hpp"
#include "twistbench/modules.hpp"
#include "twistbench/rewrite.hpp"
#include "twistbench/twist.hpp"

using namespace tb;
using json = nlohmann::ordered_json;

namespace {

struct Opts {
  std::string in, catalog, params, tower, order, chart, point, element, sigma, vectors;
  std::string cocycle, cocycle2, group, table, images, phi;
  std::string other_in, other_catalog, other_params;
  int degree = -1;
  int max_power = 8;
  int bound = 0;
  int n = 0;
  long seed = 0;
  bool json_out = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& x : out) {
    size_t a = x.find_first_not_of(' '), b = x.find_last_not_of(' ');
    x = a == std::string::npos ? "" : x.substr(a, b - a + 1);
  }
  return out;
}

// FNV-1a, stable across runs and platforms.
std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail_parse("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// "i: t^2 + 1; ra: t^2 - 2"
TowerPtr parse_tower(const std::string& spec) {
  std::vector<std::pair<std::string, std::string>> levels;
  for (auto& part : split(spec, ';')) {
    if (part.empty()) continue;
    auto colon = part.find(':');
    if (colon == std::string::npos) fail_parse("tower level '" + part + "' needs the form symbol: polynomial");
    levels.push_back({split(part.substr(0, colon), ',')[0], split(part.substr(colon + 1), ';')[0]});
  }
  return FieldTower::build(levels);
}

struct Input {
  Presentation p;
  std::optional<CatalogEntry> entry;
  std::string label;
  std::string digest;
};

Input load_input(const std::string& in, const std::string& catalog, const std::string& params, const TowerPtr& tower) {
  Input out;
  if (!in.empty() && !catalog.empty()) fail_parse("give either --in or --catalog, not both");
  if (!in.empty()) {
    std::string text = read_file(in);
    out.p = parse_presentation(text);
    if (tower) {
      if (!join_towers(tower, out.p.tower)->same_as(*tower))
        fail_pre("tower", "--tower must extend the field of the input file");
    }
    out.label = "file " + in;
    out.digest = digest(text);
  } else if (!catalog.empty()) {
    out.entry = catalog_get(catalog, split(params, ','), tower);
    out.p = out.entry->presentation;
    out.label = "catalog " + catalog + "(" + params + ")";
    out.digest = digest(out.p.to_text());
  } else {
    fail_parse("an input is required: --in <file> or --catalog <name>");
  }
  return out;
}

int max_degree_cap() {
  const char* env = std::getenv("TWISTBENCH_MAX_DEGREE");
  if (!env || !*env) return -1;
  try {
    return std::stoi(env);
  } catch (...) {
    fail_parse(std::string("TWISTBENCH_MAX_DEGREE is not an integer: ") + env);
  }
}

int checked_degree(int d) {
  int cap = max_degree_cap();
  if (cap >= 0 && d > cap)
    fail_pre("degree-exceeds-bound",
             "degree " + std::to_string(d) + " exceeds TWISTBENCH_MAX_DEGREE=" + std::to_string(cap));
  return d;
}

std::string scalar_list(const std::vector<Scalar>& v) {
  std::string s;
  for (size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + v[k].to_string();
  return s;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    rows.push_back(row);
  }
  return rows;
}

std::vector<Scalar> parse_coords(const std::string& text, const TowerPtr& tower) {
  std::vector<Scalar> out;
  for (auto& s : split(text, ',')) out.push_back(parse_scalar(s, tower));
  return out;
}

// Text rendering of a report: one "key: value" line per field; lists of
// scalars on one line, lists of records one per line.
bool is_primitive(const json& j) { return !j.is_array() && !j.is_object(); }

std::string prim(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string inline_text(const json& j) {
  if (is_primitive(j)) return prim(j);
  std::string s;
  if (j.is_array()) {
    s = "[";
    bool first = true;
    for (auto& x : j) {
      s += (first ? "" : ", ") + inline_text(x);
      first = false;
    }
    return s + "]";
  }
  bool first = true;
  for (auto& [k, v] : j.items()) {
    s += (first ? "" : ", ") + k + "=" + inline_text(v);
    first = false;
  }
  return s;
}

void render(std::ostream& os, const json& obj, const std::string& indent) {
  for (auto& [k, v] : obj.items()) {
    if (v.is_string() && prim(v).find('\n') != std::string::npos) {
      os << indent << k << ": |\n";
      std::istringstream lines(prim(v));
      for (std::string line; std::getline(lines, line);) os << indent << "  " << line << "\n";
    } else if (is_primitive(v)) {
      os << indent << k << ": " << prim(v) << "\n";
    } else if (v.is_array()) {
      bool flat = true;
      for (auto& x : v) flat = flat && is_primitive(x) && prim(x).find(' ') == std::string::npos;
      if (flat) {
        os << indent << k << ":";
        for (auto& x : v) os << " " << prim(x);
        os << "\n";
      } else {
        os << indent << k << ":\n";
        for (auto& x : v) {
          if (!x.is_string() && is_primitive(x)) {
            os << indent << "  - " << prim(x) << "\n";
          } else if (x.is_object()) {
            // records: first field on the dash line, the rest aligned under it
            bool first = true;
            for (auto& [rk, rv] : x.items()) {
              os << indent << (first ? "  - " : "    ") << rk << ": " << inline_text(rv) << "\n";
              first = false;
            }
          } else {
            os << indent << "  - " << inline_text(x) << "\n";
          }
        }
      }
    } else {
      os << indent << k << ":\n";
      render(os, v, indent + "  ");
    }
  }
}

struct Report {
  std::string command;
  std::string raw;  // when set, text mode prints only this
  json settings = json::object();
  json result = json::object();
};

void emit(const Report& r, bool as_json) {
  if (as_json) {
    json out;
    out["command"] = r.command;
    out["settings"] = r.settings;
    out["result"] = r.result;
    std::cout << out.dump(2) << "\n";
  } else if (!r.raw.empty()) {
    std::cout << r.raw;
  } else {
    std::cout << "command: " << r.command << "\n";
    render(std::cout, r.settings, "");
    std::cout << "---\n";
    render(std::cout, r.result, "");
  }
}

void pin_input(Report& rep, const Input& in) {
  rep.settings["input"] = in.label;
  rep.settings["digest"] = in.digest;
  rep.settings["tower"] = in.p.tower->describe();
}

NcPoly resolve_element(const Input& in, const std::string& text) {
  if (text.empty()) fail_parse("--element is required");
  if (in.entry) {
    auto it = in.entry->elements.find(text);
    if (it != in.entry->elements.end()) return it->second;
  }
  return in.p.parse(text);
}

Cocycle resolve_cocycle(const std::string& name, const std::string& group, const std::string& table, TowerPtr tower) {
  if (!table.empty()) {
    if (group.empty()) fail_parse("--table needs --group");
    FinAbGroup g = FinAbGroup::parse(group);
    if (!tower) tower = cyclotomic_tower(4);
    std::vector<Scalar> vals;
    for (auto& row : split(table, ';'))
      for (auto& x : split(row, ',')) vals.push_back(parse_scalar(x, tower));
    if (vals.size() != g.size() * g.size())
      fail_parse("a cocycle table on " + g.describe() + " needs " + std::to_string(g.size() * g.size()) + " entries");
    return Cocycle::verify(g, vals);
  }
  if (name.empty()) fail_parse("--cocycle or --group with --table is required");
  std::string n = name.rfind("builtin:", 0) == 0 ? name.substr(8) : name;
  if (!tower) {
    int order = 4;
    if (n.rfind("heisenberg(", 0) == 0) order = std::stoi(n.substr(11));
    tower = cyclotomic_tower(order == 2 ? 4 : order);
  }
  return builtin_cocycle(n, tower);
}

json cocycle_json(const Cocycle& mu) {
  json rows = json::array();
  size_t n = mu.group().size();
  for (size_t a = 0; a < n; ++a) {
    std::string row;
    for (size_t b = 0; b < n; ++b) row += (b ? " " : "") + mu(a, b).to_string();
    rows.push_back(mu.group().name(a) + " | " + row);
  }
  return rows;
}

json rules_json(const RewriteSystem& r) {
  json out = json::array();
  const Presentation& p = r.presentation();
  for (auto& rule : r.rules()) out.push_back(p.show(rule.lead) + " -> " + (rule.tail.is_zero() ? "0" : p.show(rule.tail)));
  return out;
}

ChartPlan parse_chart(const std::string& spec) {
  ChartPlan plan;
  plan.name = spec;
  for (auto& part : split(spec, ';')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) fail_parse("chart part '" + part + "' needs key=list");
    std::string key = part.substr(0, eq);
    auto vars = split(part.substr(eq + 1), ',');
    if (key == "ones")
      plan.ones = vars;
    else if (key == "zeros")
      plan.zeros = vars;
    else if (key == "product")
      plan.product_one = vars;
    else
      fail_parse("unknown chart key '" + key + "' (ones, zeros, product)");
  }
  return plan;
}

json invariants_json(const IdealInvariants& inv) {
  json j;
  j["dim"] = inv.dim_text();
  j["codim"] = inv.codim ? std::to_string(*inv.codim) : std::string("unit ideal");
  if (inv.quotient_dim) j["quotient_dim"] = *inv.quotient_dim;
  return j;
}

TowerPtr module_tower(const Input& in, const std::vector<Scalar>& extra) {
  TowerPtr t = in.p.tower;
  for (auto& x : extra) t = join_towers(t, x.tower());
  return t;
}

json module_json(const TruncatedModule& m) {
  json j;
  j["dims"] = m.dims;
  json pts = json::array();
  for (auto& p : m.source_points) pts.push_back(p.to_string());
  j["source_points"] = pts;
  json acts = json::array();
  auto names = m.algebra.names();
  for (size_t d = 0; d < m.action.size(); ++d)
    for (size_t i = 0; i < m.action[d].size(); ++i) {
      json a;
      a["degree"] = d;
      a["generator"] = names[i];
      a["matrix"] = inline_text(matrix_json(m.action[d][i]));
      acts.push_back(a);
    }
  j["action"] = acts;
  return j;
}

TruncatedModule build_fat_point(const Input& in, const Opts& o, Report& rep) {
  if (!in.p.grading) fail_pre("no-grading", "fatpoint needs a Klein-graded source presentation");
  if (o.point.empty() || o.sigma.empty()) fail_parse("fatpoint needs --point and --sigma");
  auto coords = parse_coords(o.point, in.p.tower);
  Matrix sigma = parse_matrix(o.sigma, in.p.ngens(), in.p);
  int D = checked_degree(o.degree < 0 ? 4 : o.degree);
  Presentation twist = cocycle_twist(in.p, presentation_cocycle(in.p));
  auto ps = point_sequence_from_linear_automorphism(in.p, ProjPoint::make(coords), sigma, D);
  auto m = fat_point_build(in.p, twist, ps, klein_embedding(*in.p.grading, module_tower(in, coords)));
  rep.settings["degree"] = D;
  rep.settings["sigma"] = o.sigma;
  rep.settings["point"] = o.point;
  return m;
}

void add_input(CLI::App* sc, Opts& o) {
  sc->add_option("--in", o.in, "presentation file");
  sc->add_option("--catalog", o.catalog, "catalog entry name");
  sc->add_option("--params", o.params, "comma-separated catalog parameters");
  sc->add_option("--tower", o.tower, "field tower, e.g. \"i: t^2 + 1; r: t^2 - 2\"");
}

}  // namespace

int main(int argc, char** argv) {
  auto start = std::chrono::steady_clock::now();
  Opts o;
  CLI::App app{"twistbench: exact computations with cocycle twists of graded algebras"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json_out, "structured JSON output");
  app.add_option("--seed", o.seed, "seed for randomized checks");

  std::string command;
  for (int k = 1; k < argc; ++k) command += (k > 1 ? " " : "") + std::string(argv[k]);

  Report rep;
  rep.command = command;
  TowerPtr tower;
  auto input = [&]() {
    if (!o.tower.empty()) tower = parse_tower(o.tower);
    Input in = load_input(o.in, o.catalog, o.params, tower);
    pin_input(rep, in);
    return in;
  };
  auto order_of = [&](const Presentation& p) {
    MonomialOrder ord = o.order.empty() ? MonomialOrder::standard(p.ngens()) : MonomialOrder::parse(o.order, p);
    rep.settings["order"] = ord.describe(p);
    return ord;
  };
  auto with_json = [&](CLI::App* sc) {
    sc->add_flag("--json", o.json_out, "structured JSON output");
    sc->add_option("--seed", o.seed, "seed for randomized checks");
    return sc;
  };

  std::map<std::string, std::function<void()>> actions;

  auto* parse = with_json(app.add_subcommand("parse", "parse and validate a presentation"));
  add_input(parse, o);
  actions["parse"] = [&] {
    Input in = input();
    in.p.validate();
    rep.result["generators"] = in.p.names();
    rep.result["relations"] = in.p.relations.size();
    json rels = json::array();
    for (auto& r : in.p.relations) rels.push_back(in.p.show(r));
    rep.result["relation_list"] = rels;
    if (in.p.grading) {
      json g = json::array();
      for (size_t k = 0; k < in.p.ngens(); ++k)
        g.push_back(in.p.gens[k].name + ":" + in.p.grading->group.name(in.p.grading->grade[k]));
      rep.result["grading"] = g;
    }
    if (!in.p.cocycle.empty()) rep.result["cocycle"] = in.p.cocycle;
  };

  auto* twist = with_json(app.add_subcommand("twist", "cocycle twist of a graded presentation"));
  add_input(twist, o);
  twist->add_option("--cocycle", o.cocycle, "builtin:<name>, overriding the presentation's cocycle");
  actions["twist"] = [&] {
    Input in = input();
    if (!o.cocycle.empty()) in.p.cocycle = o.cocycle.rfind("builtin:", 0) == 0 ? o.cocycle : "builtin:" + o.cocycle;
    rep.settings["cocycle"] = in.p.cocycle;
    std::vector<TwistRow> rows;
    Presentation tw = cocycle_twist(in.p, presentation_cocycle(in.p), &rows);
    json table = json::array();
    for (auto& row : rows) {
      json r;
      r["before"] = in.p.show(row.before);
      r["after"] = tw.show(row.after);
      std::string factors;
      for (auto& [w, c] : row.factors)
        factors += (factors.empty() ? "" : ", ") + in.p.show(NcPoly::word(w)) + " -> " + c.to_string();
      r["factors"] = factors;
      table.push_back(r);
    }
    rep.result["table"] = table;
    rep.result["presentation"] = tw.to_text();
  };

  auto* gb = with_json(app.add_subcommand("gb", "truncated noncommutative Groebner basis"));
  add_input(gb, o);
  gb->add_option("--degree", o.degree, "truncation degree");
  gb->add_option("--order", o.order, "generator precedence, e.g. \"x0<x1<x2<x3\"");
  actions["gb"] = [&] {
    Input in = input();
    int D = checked_degree(o.degree < 0 ? 4 : o.degree);
    rep.settings["degree"] = D;
    auto r = complete_to_degree(in.p, D, order_of(in.p));
    auto audit = audit_confluence(r);
    rep.result["rules"] = r.rule_count();
    rep.result["closed"] = r.closed();
    rep.result["stabilised"] = r.stabilised();
    rep.result["overlaps_audited"] = audit.overlaps;
    rep.result["audit_failures"] = audit.failures;
    rep.result["rule_list"] = rules_json(r);
  };

  auto* hilbert = with_json(app.add_subcommand("hilbert", "Hilbert function through a degree"));
  add_input(hilbert, o);
  hilbert->add_option("--degree", o.degree, "last degree");
  hilbert->add_option("--order", o.order, "generator precedence");
  actions["hilbert"] = [&] {
    Input in = input();
    int D = checked_degree(o.degree < 0 ? 6 : o.degree);
    rep.settings["degree"] = D;
    auto h = hilbert_function(in.p, D, order_of(in.p));
    std::string line;
    for (size_t k = 0; k < h.size(); ++k) line += (k ? " " : "") + std::to_string(h[k]);
    rep.result["hilbert"] = line;
  };

  auto element_cmd = [&](const std::string& name, const std::string& help) {
    auto* sc = with_json(app.add_subcommand(name, help));
    add_input(sc, o);
    sc->add_option("--element", o.element, "element expression or catalog element name");
    sc->add_option("--degree", o.degree, "completion degree");
    sc->add_option("--order", o.order, "generator precedence");
    return sc;
  };
  element_cmd("central", "is an element central");
  actions["central"] = [&] {
    Input in = input();
    NcPoly z = resolve_element(in, o.element);
    int D = checked_degree(o.degree < 0 ? z.degree() + 1 : o.degree);
    rep.settings["degree"] = D;
    rep.settings["element"] = in.p.show(z);
    auto r = complete_to_degree(in.p, D, order_of(in.p));
    rep.result["central"] = is_central(z, r);
  };
  element_cmd("normal", "is an element normal");
  actions["normal"] = [&] {
    Input in = input();
    NcPoly z = resolve_element(in, o.element);
    int D = checked_degree(o.degree < 0 ? z.degree() + 1 : o.degree);
    rep.settings["degree"] = D;
    rep.settings["element"] = in.p.show(z);
    auto r = complete_to_degree(in.p, D, order_of(in.p));
    auto res = is_normal_element(z, r);
    rep.result["normal"] = res.has_value();
    if (res) {
      json twists = json::array();
      for (size_t i = 0; i < res->size(); ++i)
        twists.push_back(in.p.gens[i].name + " z = z (" + ((*res)[i].is_zero() ? "0" : in.p.show((*res)[i])) + ")");
      rep.result["twisting"] = twists;
    }
  };
  auto* nil = element_cmd("nilpotent-check", "nilpotency index of an element");
  nil->add_option("--max-power", o.max_power, "largest power tried");
  actions["nilpotent-check"] = [&] {
    Input in = input();
    NcPoly z = resolve_element(in, o.element);
    int D = checked_degree(o.degree < 0 ? z.degree() * o.max_power : o.degree);
    rep.settings["degree"] = D;
    rep.settings["element"] = in.p.show(z);
    rep.settings["max_power"] = o.max_power;
    auto r = complete_to_degree(in.p, D, order_of(in.p));
    auto idx = nilpotency_index(z, r, o.max_power);
    rep.result["nilpotent"] = idx.has_value();
    if (idx) rep.result["index"] = *idx;
  };

  auto* cd = with_json(app.add_subcommand("centre-dim", "dimension of the centre in one degree"));
  add_input(cd, o);
  cd->add_option("--degree", o.degree, "degree")->required();
  cd->add_option("--order", o.order, "generator precedence");
  actions["centre-dim"] = [&] {
    Input in = input();
    int d = checked_degree(o.degree);
    checked_degree(d + 1);
    rep.settings["degree"] = d;
    auto r = complete_to_degree(in.p, d + 1, order_of(in.p));
    auto basis = centre_basis(r, d);
    rep.result["dimension"] = basis.size();
    json b = json::array();
    for (auto& z : basis) b.push_back(in.p.show(z));
    rep.result["basis"] = b;
  };

  auto* ps = with_json(app.add_subcommand("pointscheme", "point-scheme membership or chart invariants"));
  add_input(ps, o);
  ps->add_option("--point", o.point, "comma-separated coordinates");
  ps->add_option("--chart", o.chart, "\"ones=v01,v02;zeros=...;product=...\"");
  actions["pointscheme"] = [&] {
    Input in = input();
    if (!o.point.empty()) {
      auto c = check_point(in.p, ProjPoint::make(parse_coords(o.point, in.p.tower)));
      rep.result["point"] = c.point.to_string();
      rep.result["rank"] = c.rank;
      rep.result["image"] = c.image.to_string();
      rep.result["fixed"] = c.fixed;
      if (in.entry) {
        for (auto& [name, f] : in.entry->elements)
          if (f.degree() == 2 && f.is_homogeneous())
            rep.result[name + "(p, p^phi)"] = bilinear_eval(f, c.point.coords, c.image.coords).to_string();
      }
    } else if (!o.chart.empty()) {
      auto res = run_chart(in.p, parse_chart(o.chart));
      rep.settings["chart"] = o.chart;
      rep.result["chart"] = invariants_json(res.invariants);
    } else {
      fail_parse("pointscheme needs --point or --chart");
    }
  };

  auto* ls = with_json(app.add_subcommand("linescheme", "codimension of the 3x3 minors of M(t)"));
  add_input(ls, o);
  actions["linescheme"] = [&] {
    Input in = input();
    rep.result["codim"] = line_scheme_codim(in.p);
  };

  auto* ml = with_json(app.add_subcommand("multilinearize", "multilinearised relations"));
  add_input(ml, o);
  actions["multilinearize"] = [&] {
    Input in = input();
    auto id = multilinearize(in.p);
    rep.result["variables"] = id.ring->vars;
    json forms = json::array();
    for (auto& f : id.gens) forms.push_back(f.to_string());
    rep.result["forms"] = forms;
  };

  auto* orb = with_json(app.add_subcommand("orbits", "G-orbit of a point"));
  add_input(orb, o);
  orb->add_option("--point", o.point, "comma-separated coordinates")->required();
  actions["orbits"] = [&] {
    Input in = input();
    if (!in.p.grading) fail_pre("no-grading", "orbits needs a G-graded presentation");
    auto orbit = point_orbit(ProjPoint::make(parse_coords(o.point, in.p.tower)), *in.p.grading);
    json pts = json::array();
    for (auto& q : orbit) pts.push_back(q.to_string());
    rep.result["size"] = orbit.size();
    rep.result["orbit"] = pts;
  };

  auto* fp = with_json(app.add_subcommand("fatpoint", "M_p^2 restricted to the twist"));
  add_input(fp, o);
  fp->add_option("--point", o.point, "p_0 coordinates");
  fp->add_option("--sigma", o.sigma, "linear automorphism, e.g. diag(10,5,2,1)");
  fp->add_option("--degree", o.degree, "truncation degree");
  actions["fatpoint"] = [&] {
    Input in = input();
    auto m = build_fat_point(in, o, rep);
    auto chk = module_checks(m);
    rep.result["module"] = module_json(m);
    rep.result["generated_in_degree_0"] = chk.generated_in_degree_0;
    rep.result["criticality_proxy"] = chk.criticality_proxy;
    if (!chk.witness.empty()) rep.result["witness"] = chk.witness;
  };

  auto* dc = with_json(app.add_subcommand("decompose", "point-submodule decomposition of a fat point"));
  add_input(dc, o);
  dc->add_option("--point", o.point, "p_0 coordinates");
  dc->add_option("--sigma", o.sigma, "linear automorphism");
  dc->add_option("--degree", o.degree, "truncation degree");
  dc->add_option("--vectors", o.vectors, "degree-0 vectors, e.g. \"1,0;0,1\"")->required();
  actions["decompose"] = [&] {
    Input in = input();
    auto m = build_fat_point(in, o, rep);
    TowerPtr t = m.tower();
    if (!o.tower.empty()) t = join_towers(t, parse_tower(o.tower));
    std::vector<Vec> vs;
    for (auto& v : split(o.vectors, ';')) vs.push_back(parse_coords(v, t));
    rep.settings["vectors"] = o.vectors;
    auto cert = decompose_check(m, vs);
    json parts = json::array();
    for (auto& part : cert.parts) {
      json j;
      j["generator"] = scalar_list(part.generator);
      j["label"] = part.label().to_string();
      json pts = json::array();
      for (auto& q : part.points) pts.push_back(q.to_string());
      j["points"] = pts;
      parts.push_back(j);
    }
    rep.result["parts"] = parts;
    rep.result["independent"] = cert.independent;
    rep.result["spans"] = cert.spans;
    rep.result["direct_sum"] = cert.direct_sum();
  };

  auto* coc = with_json(app.add_subcommand("cocycle", "2-cocycles and H^2"));
  coc->require_subcommand(1);
  auto cocycle_opts = [&](CLI::App* sc) {
    with_json(sc);
    sc->add_option("--cocycle", o.cocycle, "builtin name: klein_mu, heisenberg(n), trivial:<group>");
    sc->add_option("--group", o.group, "group, e.g. \"C2 x C2\"");
    sc->add_option("--table", o.table, "rows separated by ';', entries by ','");
    sc->add_option("--tower", o.tower, "field tower for the values");
    return sc;
  };
  cocycle_opts(coc->add_subcommand("verify", "check normalisation and the cocycle identity"));
  actions["cocycle verify"] = [&] {
    if (!o.tower.empty()) tower = parse_tower(o.tower);
    Cocycle mu = resolve_cocycle(o.cocycle, o.group, o.table, tower);
    rep.settings["group"] = mu.group().describe();
    rep.settings["tower"] = mu.tower()->describe();
    rep.result["cocycle"] = true;
    rep.result["table"] = cocycle_json(mu);
  };
  auto* h2 = with_json(coc->add_subcommand("h2", "structure of H^2(G, k^x)"));
  h2->add_option("--group", o.group, "group, e.g. \"C2 x C2\"")->required();
  actions["cocycle h2"] = [&] {
    FinAbGroup g = FinAbGroup::parse(o.group);
    rep.settings["group"] = g.describe();
    auto f = h2_structure(g);
    size_t order = 1;
    json factors = json::array();
    for (int x : f) {
      order *= static_cast<size_t>(x);
      factors.push_back("C" + std::to_string(x));
    }
    rep.result["order"] = order;
    rep.result["h2"] = f.empty() ? std::string("trivial") : inline_text(factors);
  };
  auto* coh = cocycle_opts(coc->add_subcommand("cohomologous", "search a coboundary witness"));
  coh->add_option("--cocycle2", o.cocycle2, "second builtin cocycle")->required();
  coh->add_option("--bound", o.bound, "values of rho in the L-th roots of unity");
  actions["cocycle cohomologous"] = [&] {
    if (!o.tower.empty()) tower = parse_tower(o.tower);
    Cocycle a = resolve_cocycle(o.cocycle, o.group, o.table, tower);
    TowerPtr t = tower ? tower : a.tower();
    Cocycle b = resolve_cocycle(o.cocycle2, "", "", t);
    int L = o.bound > 0 ? o.bound : static_cast<int>(a.group().size());
    rep.settings["bound"] = L;
    rep.settings["tower"] = t->describe();
    auto w = is_cohomologous(a, b, L, t);
    rep.result["cohomologous"] = w.has_value();
    if (w) {
      json rho = json::array();
      for (size_t g = 0; g < w->size(); ++g) rho.push_back(a.group().name(g) + " -> " + (*w)[g].to_string());
      rep.result["rho"] = rho;
    }
  };
  auto* tr = cocycle_opts(coc->add_subcommand("transport", "mu(sigma^-1 g, sigma^-1 h) for an automorphism"));
  tr->add_option("--images", o.images, "images of the cyclic generators, e.g. \"g2,g1\"")->required();
  tr->add_option("--bound", o.bound, "root-of-unity bound for the witness search");
  actions["cocycle transport"] = [&] {
    if (!o.tower.empty()) tower = parse_tower(o.tower);
    Cocycle mu = resolve_cocycle(o.cocycle, o.group, o.table, tower);
    GroupMorphism sigma;
    for (auto& x : split(o.images, ',')) sigma.generator_images.push_back(mu.group().parse_element(x));
    check_automorphism(mu.group(), sigma);
    Cocycle moved = transport_cocycle(mu, sigma);
    int L = o.bound > 0 ? o.bound : 4;
    rep.settings["images"] = o.images;
    rep.settings["bound"] = L;
    rep.result["transported"] = cocycle_json(moved);
    auto w = is_cohomologous(moved, mu, L, mu.tower());
    rep.result["cohomologous_to_original"] = w.has_value();
    if (w) {
      json rho = json::array();
      for (size_t g = 0; g < w->size(); ++g) rho.push_back(mu.group().name(g) + " -> " + (*w)[g].to_string());
      rep.result["rho"] = rho;
    }
  };

  auto* zb = with_json(app.add_subcommand("zhang-bridge", "Zhang twist as a cocycle twist"));
  add_input(zb, o);
  zb->add_option("--phi", o.phi, "graded automorphism on the degree-1 space")->required();
  zb->add_option("--n", o.n, "order of phi")->required();
  zb->add_option("--degree", o.degree, "check degree");
  actions["zhang-bridge"] = [&] {
    Input in = input();
    int D = checked_degree(o.degree < 0 ? 4 : o.degree);
    rep.settings["degree"] = D;
    rep.settings["phi"] = o.phi;
    Matrix phi = parse_matrix(o.phi, in.p.ngens(), in.p);
    auto r = zhang_as_cocycle(in.p, phi, o.n, D);
    rep.result["pairs_checked"] = r.pairs_checked;
    rep.result["agree"] = r.agree;
    rep.result["presentations_match"] = r.presentations_match;
    if (!r.witness.empty()) rep.result["witness"] = r.witness;
    json rels = json::array();
    for (auto& f : r.zhang_twisted.relations) rels.push_back(r.zhang_twisted.show(f));
    rep.result["zhang_relations"] = rels;
  };

  auto* kd = with_json(app.add_subcommand("koszul-dual", "quadratic dual T(V*)/(R^perp)"));
  add_input(kd, o);
  actions["koszul-dual"] = [&] {
    Input in = input();
    Presentation d = koszul_dual(in.p);
    json rels = json::array();
    for (auto& f : d.relations) rels.push_back(d.show(f));
    rep.result["generators"] = d.names();
    rep.result["relations"] = rels;
  };

  auto* iso = with_json(app.add_subcommand("iso-check", "equality of relation ideals degree by degree"));
  add_input(iso, o);
  iso->add_option("--other-in", o.other_in, "second presentation file");
  iso->add_option("--other-catalog", o.other_catalog, "second catalog entry");
  iso->add_option("--other-params", o.other_params, "its parameters");
  iso->add_option("--degree", o.degree, "last degree compared");
  actions["iso-check"] = [&] {
    Input in = input();
    Input other = load_input(o.other_in, o.other_catalog, o.other_params, tower);
    rep.settings["other"] = other.label;
    int D = checked_degree(o.degree < 0 ? 3 : o.degree);
    rep.settings["degree"] = D;
    auto cert = relation_span_equal(in.p, other.p, D);
    rep.result["equal"] = cert.equal;
    if (!cert.equal) {
      rep.result["first_degree"] = cert.degree;
      rep.result["separating"] = cert.separating;
    }
  };

  auto* cat = with_json(app.add_subcommand("catalog", "built-in algebra families"));
  cat->require_subcommand(1);
  with_json(cat->add_subcommand("list", "list entries"));
  actions["catalog list"] = [&] {
    json entries = json::array();
    for (auto& info : catalog_list()) {
      std::string params;
      for (size_t k = 0; k < info.params.size(); ++k) params += (k ? "," : "") + info.params[k];
      entries.push_back(info.name + "(" + params + "): " + info.description);
    }
    rep.result["entries"] = entries;
  };
  auto* emitc = with_json(cat->add_subcommand("emit", "print an entry as a presentation file"));
  emitc->add_option("--catalog", o.catalog, "entry name")->required();
  emitc->add_option("--params", o.params, "comma-separated parameters");
  emitc->add_option("--tower", o.tower, "field tower");
  actions["catalog emit"] = [&] {
    Input in = input();
    rep.result["presentation"] = in.p.to_text();
    rep.raw = in.p.to_text();
    json els = json::array();
    for (auto& [name, f] : in.entry->elements) els.push_back(name + " = " + in.p.show(f));
    rep.result["elements"] = els;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::string key;
  for (auto* sc : app.get_subcommands()) {
    key = sc->get_name();
    for (auto* sub : sc->get_subcommands()) key += " " + sub->get_name();
  }
  try {
    auto it = actions.find(key);
    if (it == actions.end()) fail_parse("unknown command '" + key + "'");
    if (o.seed) rep.settings["seed"] = o.seed;
    it->second();
    emit(rep, o.json_out);
  } catch (const TwistError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!e.payload().empty()) std::cerr << "payload: " << e.payload() << "\n";
    switch (e.error_class()) {
      case ErrorClass::Parse:
        return 2;
      case ErrorClass::Precondition:
        return 3;
      case ErrorClass::Internal:
        return 4;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "wall-clock: %.3f s\n", secs);
  return 0;
}
