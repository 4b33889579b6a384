#include "tmodel/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "tmodel/ahss.hpp"

namespace tmodel {

namespace fs = std::filesystem;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::ostringstream s;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) s << (i ? "\t" : "") << cells[i];
      s << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return s.str();
  }
};

// Written to a temporary name and renamed so readers never see a partial file.
void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  fs::create_directories(dir);
  fs::path target = fs::path(dir) / name;
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw Error("cannot write " + tmp.string());
    f << body;
  }
  fs::rename(tmp, target);
}

void emit(const CliOptions& opt, std::ostream& out, const std::string& name, const Table& t) {
  std::string body = t.str();
  write_file(opt.out_dir, name, body);
  out << "# " << name << "\n" << body;
}

std::string unknown_token(std::size_t budget) { return "UNKNOWN(budget=" + std::to_string(budget) + ")"; }

std::string show(const std::optional<AbGroup>& g, std::size_t budget) {
  return g ? g->to_string() : unknown_token(budget);
}

std::string show_bool(bool b) { return b ? "true" : "false"; }

std::string show_level(int n) {
  if (n == kPlusInfinity) return "+inf";
  if (n == kMinusInfinity) return "-inf";
  return std::to_string(n);
}

std::string invariant_factors(const AbGroup& g) {
  if (g.torsion().empty()) return "-";
  std::string s;
  for (const auto& d : g.torsion()) s += (s.empty() ? "" : ",") + d.get_str();
  return s;
}

std::string matrix_text(const Matrix& m) {
  std::string s = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    s += r ? ",[" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) s += (c ? "," : "") + m(r, c).get_str();
    s += "]";
  }
  return s + "]";
}

const std::string& arg(const std::vector<std::string>& args, std::size_t i, const std::string& what) {
  if (i >= args.size()) throw MissingArgument(what);
  return args[i];
}

int int_arg(const std::vector<std::string>& args, std::size_t i, const std::string& what) {
  const std::string& s = arg(args, i, what);
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw MissingArgument(what + " must be an integer, got '" + s + "'");
}

std::vector<int> degrees(const CliOptions& opt, int lo, int hi) {
  if (opt.degree) return {*opt.degree};
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::pair<int, int> tower_degrees(const ComplexTower& t) {
  int lo = t.at(0).lo(), hi = t.at(0).hi();
  for (const auto& e : t.entries()) {
    lo = std::min(lo, e.lo());
    hi = std::max(hi, e.hi());
  }
  return {lo, hi};
}

struct Ctx {
  const Workspace& ws;
  const std::vector<std::string>& args;
  const CliOptions& opt;
  std::ostream& out;
  std::size_t filler() const { return opt.budget_filler.value_or(ws.config.budget_filler); }
  std::size_t reindex() const { return opt.budget_reindex.value_or(ws.config.budget_reindex); }
  std::size_t lim() const { return ws.config.lim_window; }
};

int cmd_homology(Ctx& c) {
  const ChainComplex& x = c.ws.complex(arg(c.args, 0, "complex"));
  Table t{{"degree", "group"}, {}};
  for (int n : degrees(c.opt, x.lo(), x.hi())) t.rows.push_back({std::to_string(n), homology(x, n).to_string()});
  emit(c.opt, c.out, "homology.tsv", t);
  return kExitOk;
}

int cmd_truncate(Ctx& c) {
  const std::string& name = arg(c.args, 0, "complex");
  int n = int_arg(c.args, 1, "truncation degree");
  const ChainComplex& x = c.ws.complex(name);
  Truncation above = truncate_above(x, n), below = truncate_below_free(x, n);
  Workspace w;
  w.ring = c.ws.ring;
  w.add_complex(name, x);
  std::string ge = name + "_ge_" + std::to_string(n), le = name + "_le_" + std::to_string(n);
  w.add_complex(ge, above.complex);
  w.add_complex(le, below.complex);
  w.add_map(ge + "_incl", ge, name, above.anchor);
  w.add_map(le + "_proj", name, le, below.anchor);
  write_file(c.opt.out_dir, "truncate.json", serialize_workspace(w));
  Table t{{"degree", "H(X)", "H(tau_ge)", "H(tau_le)"}, {}};
  int lo = std::min({x.lo(), above.complex.lo(), below.complex.lo()});
  int hi = std::max({x.hi(), above.complex.hi(), below.complex.hi()});
  for (int k = lo; k <= hi; ++k)
    t.rows.push_back({std::to_string(k), homology(x, k).to_string(), homology(above.complex, k).to_string(),
                      homology(below.complex, k).to_string()});
  emit(c.opt, c.out, "truncate.tsv", t);
  return kExitOk;
}

int cmd_classify(Ctx& c) {
  const ChainMap& f = c.ws.map(arg(c.args, 0, "map"));
  MapClassification m = classify_map(f);
  Table t{{"property", "value"},
          {{"max_n_equivalence", show_level(m.max_n_equivalence)},
           {"min_co_n_equivalence", show_level(m.min_co_n_equivalence)},
           {"weak_equivalence", show_bool(m.is_weak_equivalence)},
           {"cofibration", show_bool(is_cofibration(f))},
           {"fibration", show_bool(is_fibration(f))}}};
  emit(c.opt, c.out, "classify.tsv", t);
  return kExitOk;
}

int cmd_factor(Ctx& c) {
  const std::string& name = arg(c.args, 0, "map");
  int n = int_arg(c.args, 1, "degree n");
  const ChainMap& f = c.ws.map(name);
  Factorization fac = factor_n(f, n);
  Workspace w;
  w.ring = c.ws.ring;
  w.add_complex("X", f.source());
  w.add_complex("Y", f.target());
  w.add_complex("Z", fac.i.target());
  w.add_map("i", "X", "Z", fac.i);
  w.add_map("p", "Z", "Y", fac.p);
  write_file(c.opt.out_dir, "factor.json", serialize_workspace(w));
  Table t{{"check", "value"},
          {{"i_cofibration", show_bool(is_cofibration(fac.i))},
           {"i_n_equivalence", show_bool(is_n_equivalence(fac.i, n))},
           {"p_fibration", show_bool(is_fibration(fac.p))},
           {"p_co_n_equivalence", show_bool(is_co_n_equivalence(fac.p, n))},
           {"p_after_i_equals_f", show_bool(compose(fac.p, fac.i) == f)}}};
  emit(c.opt, c.out, "factor.tsv", t);
  return kExitOk;
}

int cmd_lift(Ctx& c) {
  const ChainMap& i = c.ws.map(arg(c.args, 0, "map i"));
  const ChainMap& p = c.ws.map(arg(c.args, 1, "map p"));
  const ChainMap& top = c.ws.map(arg(c.args, 2, "map top"));
  const ChainMap& bottom = c.ws.map(arg(c.args, 3, "map bottom"));
  int n = int_arg(c.args, 4, "degree n");
  auto h = find_lift(i, p, top, bottom, n);
  Table t{{"check", "value"}, {{"lift", h ? "found" : "none"}}};
  if (h) {
    t.rows.push_back({"h_after_i_equals_top", show_bool(compose(*h, i) == top)});
    t.rows.push_back({"p_after_h_equals_bottom", show_bool(compose(p, *h) == bottom)});
    Workspace w;
    w.ring = c.ws.ring;
    w.add_complex("B", h->source());
    w.add_complex("E", h->target());
    w.add_map("lift", "B", "E", *h);
    write_file(c.opt.out_dir, "lift.json", serialize_workspace(w));
  }
  emit(c.opt, c.out, "lift.tsv", t);
  return kExitOk;
}

int cmd_cohomology(Ctx& c) {
  const ChainComplex& x = c.ws.complex(arg(c.args, 0, "complex"));
  AbGroup a = parse_group(c.ws.ring, arg(c.args, 1, "coefficient group"));
  Table t{{"degree", "group"}, {}};
  for (int p : degrees(c.opt, x.lo() - 1, x.hi() + 1))
    t.rows.push_back({std::to_string(p), cohomology_with_coefficients(x, a, p).to_string()});
  emit(c.opt, c.out, "cohomology.tsv", t);
  return kExitOk;
}

int cmd_pro_iso(Ctx& c) {
  const ComplexProMap& f = c.ws.promap(arg(c.args, 0, "pro-map"));
  auto [xl, xh] = tower_degrees(f.source);
  auto [yl, yh] = tower_degrees(f.target);
  Table t{{"degree", "verdict", "detail"}, {}};
  bool unknown = false;
  for (int n : degrees(c.opt, std::min(xl, yl), std::max(xh, yh))) {
    ProIsoResult r = is_pro_isomorphism(homology_pro_map(f, n), c.filler());
    std::string detail = r.certificate;
    if (r.verdict == Verdict::True) detail = "fillers at " + std::to_string(r.witness.size()) + " levels";
    if (r.verdict == Verdict::Unknown) {
      detail = unknown_token(r.budget);
      unknown = true;
    }
    t.rows.push_back({std::to_string(n), to_string(r.verdict), detail});
  }
  emit(c.opt, c.out, "pro_iso.tsv", t);
  return unknown ? kExitUnknown : kExitOk;
}

int cmd_limlim1(Ctx& c) {
  const ComplexTower& x = c.ws.tower(arg(c.args, 0, "tower"));
  auto [lo, hi] = tower_degrees(x);
  Table t{{"degree", "lim", "lim1", "mittag_leffler"}, {}};
  bool unknown = false;
  for (int n : degrees(c.opt, lo, hi)) {
    LimResult r = lim_lim1(homology_tower(x, n), c.lim());
    unknown = unknown || !r.lim || r.lim1 == Lim1::Unknown;
    t.rows.push_back({std::to_string(n), show(r.lim, c.lim()), to_string(r.lim1), show_bool(r.mittag_leffler)});
  }
  emit(c.opt, c.out, "limlim1.tsv", t);
  return unknown ? kExitUnknown : kExitOk;
}

int cmd_prohom(Ctx& c) {
  const ComplexTower& x = c.ws.tower(arg(c.args, 0, "source tower"));
  const ComplexTower& y = c.ws.tower(arg(c.args, 1, "target tower"));
  auto [xl, xh] = tower_degrees(x);
  auto [yl, yh] = tower_degrees(y);
  Table t{{"degree", "value", "note"}, {}};
  bool unknown = false;
  for (int n : degrees(c.opt, std::min(xl, yl), std::max(xh, yh))) {
    ProHomResult r = pro_hom(homology_tower(x, n), homology_tower(y, n), c.lim());
    unknown = unknown || !r.value;
    t.rows.push_back({std::to_string(n), show(r.value, c.lim()), r.note.empty() ? "-" : r.note});
  }
  emit(c.opt, c.out, "prohom.tsv", t);
  return unknown ? kExitUnknown : kExitOk;
}

Table verdict_table(const HStarVerdict& v) {
  return {{"field", "value"},
          {{"verdict", v.verdict == HStarKind::Unknown ? unknown_token(v.budget) : to_string(v.verdict)},
           {"m_witness", v.m_witness ? show_level(*v.m_witness) : "-"},
           {"reason", v.reason.empty() ? "-" : v.reason}}};
}

int cmd_whitehead(Ctx& c) {
  HStarVerdict v = is_hstar_weak_equivalence(c.ws.promap(arg(c.args, 0, "pro-map")), c.filler());
  emit(c.opt, c.out, "whitehead.tsv", verdict_table(v));
  return v.verdict == HStarKind::Unknown ? kExitUnknown : kExitOk;
}

int cmd_postnikov(Ctx& c) {
  const std::string& name = arg(c.args, 0, "tower");
  const ComplexTower& y = c.ws.tower(name);
  Replacement r = postnikov_replacement(y);
  Workspace w;
  w.ring = c.ws.ring;
  w.add_tower(name + "_postnikov", r.tower);
  write_file(c.opt.out_dir, "postnikov.json", serialize_workspace(w));
  HStarVerdict v = is_hstar_weak_equivalence(r.map, c.filler());
  emit(c.opt, c.out, "postnikov.tsv", verdict_table(v));
  Table h{{"level", "degree", "H(Y)", "H(Z)"}, {}};
  for (std::size_t k = 0; k <= r.tower.tail_start(); ++k) {
    const ChainComplex& z = r.tower.at(k);
    for (int n = std::min(z.lo(), y.at(k).lo()); n <= std::max(z.hi(), y.at(k).hi()); ++n)
      h.rows.push_back({std::to_string(k), std::to_string(n), homology(y.at(k), n).to_string(), homology(z, n).to_string()});
  }
  emit(c.opt, c.out, "postnikov_homology.tsv", h);
  return v.verdict == HStarKind::Unknown ? kExitUnknown : kExitOk;
}

int cmd_fibrant(Ctx& c) {
  bool f = is_hstar_fibrant(c.ws.tower(arg(c.args, 0, "tower")));
  emit(c.opt, c.out, "fibrant_check.tsv", Table{{"property", "value"}, {{"hstar_fibrant", show_bool(f)}}});
  return kExitOk;
}

int cmd_prohom_const(Ctx& c) {
  const std::string& a = arg(c.args, 0, "source");
  const std::string& b = arg(c.args, 1, "target");
  int n = int_arg(c.args, 2, "degree n");
  Table t{{"field", "value"}, {}};
  bool unknown = false;
  if (c.ws.towers.count(a) && c.ws.complexes.count(b)) {
    ProHomResult r = hom_to_constant(c.ws.tower(a), c.ws.complex(b), n);
    unknown = !r.value;
    t.rows = {{"direction", "tower_to_constant"}, {"value", show(r.value, c.lim())}, {"note", r.note.empty() ? "-" : r.note}};
  } else if (c.ws.complexes.count(a) && c.ws.towers.count(b)) {
    HomFromConstant r = hom_from_constant(c.ws.complex(a), c.ws.tower(b), n, c.lim());
    unknown = !r.value;
    t.rows = {{"direction", "constant_to_tower"},
              {"lim", show(r.degree_n.lim, c.lim())},
              {"lim1", to_string(r.degree_n.lim1)},
              {"lim1_obstruction_degree_n_plus_1", to_string(r.obstruction)},
              {"value", show(r.value, c.lim())}};
  } else {
    throw MissingArgument("prohom-const needs a tower and a complex (in either order)");
  }
  emit(c.opt, c.out, "prohom_const.tsv", t);
  return unknown ? kExitUnknown : kExitOk;
}

int cmd_derived_hom(Ctx& c) {
  const ChainComplex& x = c.ws.complex(arg(c.args, 0, "source complex"));
  const ChainComplex& y = c.ws.complex(arg(c.args, 1, "target complex"));
  Table t{{"degree", "group"}, {}};
  std::vector<int> ns;
  if (c.args.size() > 2) ns = {int_arg(c.args, 2, "degree n")};
  else ns = degrees(c.opt, y.lo() - x.hi() - 1, y.hi() - x.lo() + 1);
  for (int n : ns) t.rows.push_back({std::to_string(n), derived_hom(x, y, n).to_string()});
  emit(c.opt, c.out, "derived_hom.tsv", t);
  return kExitOk;
}

int cmd_ahss(Ctx& c) {
  const ChainComplex& x = c.ws.complex(arg(c.args, 0, "source complex"));
  const ChainComplex& y = c.ws.complex(arg(c.args, 1, "target complex"));
  SpectralSequence ss = run_to_stable(x, y);
  for (const Page& pg : ss.pages) {
    Table e{{"p", "q", "invariant_factors", "free_rank"}, {}};
    Table d{{"p", "q", "target_p", "target_q", "matrix"}, {}};
    for (const auto& [at, sq] : pg.sq) {
      const AbGroup& g = sq.group();
      if (!g.is_trivial())
        e.rows.push_back({std::to_string(at.first), std::to_string(at.second), invariant_factors(g),
                          std::to_string(g.free_rank())});
      const GroupHom& m = pg.diff.at(at);
      if (!g.is_trivial() && !m.target().is_trivial())
        d.rows.push_back({std::to_string(at.first), std::to_string(at.second), std::to_string(at.first - pg.r),
                          std::to_string(at.second + pg.r - 1), matrix_text(m.matrix())});
    }
    emit(c.opt, c.out, "ahss_E" + std::to_string(pg.r) + ".tsv", e);
    write_file(c.opt.out_dir, "ahss_d" + std::to_string(pg.r) + ".tsv", d.str());
  }
  ConvergenceReport rep = convergence_check(ss);
  Table r{{"field", "value"},
          {{"lim_ok", show_bool(rep.lim_ok)},
           {"lim1_ok", show_bool(rep.lim1_ok)},
           {"colim_ok", show_bool(rep.colim_ok)},
           {"stable_page", std::to_string(rep.stable_page)},
           {"graded_comparison_all_iso", show_bool(rep.all_iso())}}};
  for (const auto& [at, ok] : rep.graded_comparison)
    if (!ok) r.rows.push_back({"mismatch", std::to_string(at.first) + "," + std::to_string(at.second)});
  emit(c.opt, c.out, "ahss_convergence.tsv", r);
  return kExitOk;
}

int cmd_pro_ahss(Ctx& c) {
  const ComplexTower& x = c.ws.tower(arg(c.args, 0, "source tower"));
  const ChainComplex& y = c.ws.complex(arg(c.args, 1, "target complex"));
  std::optional<std::pair<int, int>> window;
  if (c.opt.degree) window = std::make_pair(*c.opt.degree, *c.opt.degree);
  ProAhssResult r = pro_ahss(x, y, window);
  bool unknown = false;
  Table e{{"p", "q", "E2"}, {}};
  for (const auto& [at, g] : r.e2) {
    unknown = unknown || !g;
    if (!g || !g->is_trivial()) e.rows.push_back({std::to_string(at.first), std::to_string(at.second), show(g, 0)});
  }
  Table a{{"degree", "abutment"}, {}};
  for (const auto& [n, g] : r.abutment) {
    unknown = unknown || !g;
    a.rows.push_back({std::to_string(n), show(g, 0)});
  }
  Table cmp{{"p", "q", "comparison"}, {}};
  for (const auto& [at, v] : r.comparison) {
    unknown = unknown || v == Verdict::Unknown;
    cmp.rows.push_back({std::to_string(at.first), std::to_string(at.second), to_string(v)});
  }
  emit(c.opt, c.out, "pro_ahss_E2.tsv", e);
  emit(c.opt, c.out, "pro_ahss_abutment.tsv", a);
  emit(c.opt, c.out, "pro_ahss_comparison.tsv", cmp);
  return unknown ? kExitUnknown : kExitOk;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "homology", "truncate",  "classify",      "factor",         "lift",        "cohomology",
      "pro-iso",  "limlim1",   "prohom",        "whitehead",      "postnikov",   "fibrant-check",
      "prohom-const", "derived-hom", "ahss",    "pro-ahss",       "selftest"};
  return names;
}

int run_command(const Workspace& ws, const std::string& command, const std::vector<std::string>& args,
                const CliOptions& opt, std::ostream& out) {
  Ctx c{ws, args, opt, out};
  if (command == "homology") return cmd_homology(c);
  if (command == "truncate") return cmd_truncate(c);
  if (command == "classify") return cmd_classify(c);
  if (command == "factor") return cmd_factor(c);
  if (command == "lift") return cmd_lift(c);
  if (command == "cohomology") return cmd_cohomology(c);
  if (command == "pro-iso") return cmd_pro_iso(c);
  if (command == "limlim1") return cmd_limlim1(c);
  if (command == "prohom") return cmd_prohom(c);
  if (command == "whitehead") return cmd_whitehead(c);
  if (command == "postnikov") return cmd_postnikov(c);
  if (command == "fibrant-check") return cmd_fibrant(c);
  if (command == "prohom-const") return cmd_prohom_const(c);
  if (command == "derived-hom") return cmd_derived_hom(c);
  if (command == "ahss") return cmd_ahss(c);
  if (command == "pro-ahss") return cmd_pro_ahss(c);
  if (command == "selftest") return selftest(opt.seed, out, opt.out_dir) ? kExitOk : kExitError;
  throw UnknownCommand(command);
}

bool selftest(std::uint64_t seed, std::ostream& out, const std::string& out_dir) {
  std::mt19937_64 rng(seed);
  const Ring zz;
  Table t{{"suite", "cases", "passed"}, {}};
  auto record = [&](const std::string& name, int cases, int passed) {
    t.rows.push_back({name, std::to_string(cases), std::to_string(passed)});
    return cases == passed;
  };
  bool ok = true;

  int pass = 0;
  const int nt = 20;
  for (int i = 0; i < nt; ++i) {
    ChainComplex x = random_complex(rng, zz, -3, 3, 3);
    Truncation ge = truncate_above(x, 0);
    bool good = layer_triangle_check(x, 0);
    for (int k = ge.complex.lo(); k < 0; ++k) good = good && homology(ge.complex, k).is_trivial();
    pass += good;
  }
  ok &= record("t_structure", nt, pass);

  pass = 0;
  const int na = 6;
  for (int i = 0; i < na; ++i) {
    Ring ring = i % 2 ? Ring::prime_field(2) : zz;
    ChainComplex x = random_complex(rng, ring, -1, 1, 2), y = random_complex(rng, ring, -1, 2, 2);
    SpectralSequence ss = run_to_stable(x, y);
    pass += e2_identification_check(ss.couple) && convergence_check(ss).all_ok();
  }
  ok &= record("ahss_convergence", na, pass);

  pass = 0;
  const int np = 10;
  for (int i = 0; i < np; ++i) {
    ChainComplex x = random_complex(rng, zz, -1, 2, 2);
    Replacement r = postnikov_replacement(ComplexTower::constant(x));
    pass += is_hstar_weak_equivalence(r.map, 8).verdict == HStarKind::WeakEquivalence;
  }
  ok &= record("postnikov", np, pass);

  {
    AbGroup z = AbGroup::free(zz, 1);
    GroupHom dbl(z, z, Matrix::from_rows(zz, {{2}}));
    LimResult l = lim_lim1(GroupTower::repeating(z, dbl), 4);
    bool good = l.lim && l.lim->is_trivial() && l.lim1 == Lim1::NonzeroUncountable;
    ok &= record("lim_lim1_doubling", 1, good);
  }

  std::string body = t.str();
  write_file(out_dir, "selftest.tsv", body);
  out << "# selftest.tsv\n" << body;
  return ok;
}

}  // namespace tmodel
