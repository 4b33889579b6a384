#include "tmodel/workspace.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tmodel {

using nlohmann::json;

namespace {

[[noreturn]] void fail_parse(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail_parse(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail_parse(path, "missing field '" + key + "'");
  return *it;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail_parse(path, "expected a string");
  return j.get<std::string>();
}

int as_degree(const std::string& key, const std::string& path) {
  try {
    std::size_t used = 0;
    int d = std::stoi(key, &used);
    if (used != key.size()) throw std::invalid_argument(key);
    return d;
  } catch (const std::exception&) {
    fail_parse(path, "degree key '" + key + "' is not an integer");
  }
}

std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail_parse(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

mpz_class as_entry(const json& j, const std::string& path) {
  mpz_class v;
  if (j.is_string()) {
    if (v.set_str(j.get<std::string>(), 10) != 0) fail_parse(path, "not a decimal integer: " + j.get<std::string>());
  } else if (j.is_number_integer()) {
    v = mpz_class(std::to_string(j.get<long long>()));
  } else {
    fail_parse(path, "matrix entries must be decimal strings or integers");
  }
  return v;
}

Matrix as_matrix(const Ring& ring, const json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  if (!j.is_array()) fail_parse(path, "expected an array of rows");
  if (j.size() != rows)
    fail_parse(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  Matrix m(ring, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols)
      fail_parse(rp, "expected a row of " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, as_entry(j[r][c], rp + "[" + std::to_string(c) + "]"));
  }
  return m;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).get_str());
    rows.push_back(row);
  }
  return rows;
}

Ring parse_ring(const std::string& tag) {
  if (tag == "Z") return Ring::integers();
  if (tag.size() > 1 && tag[0] == 'F') {
    try {
      return Ring::prime_field(std::stoul(tag.substr(1)));
    } catch (const std::exception&) {
    }
  }
  fail_parse("ring", "expected \"Z\" or \"F<p>\" with p prime, got \"" + tag + "\"");
}

ChainComplex parse_complex(const Ring& ring, const std::string& name, const json& j) {
  const std::string path = "complexes." + name;
  const json& ranks = field(j, "ranks", path);
  if (!ranks.is_object()) fail_parse(path + ".ranks", "expected degree -> rank");
  if (ranks.empty()) return ChainComplex::zero(ring);
  std::map<int, std::size_t> r;
  for (auto it = ranks.begin(); it != ranks.end(); ++it)
    r[as_degree(it.key(), path + ".ranks")] = as_count(it.value(), path + ".ranks." + it.key());
  int lo = r.begin()->first, hi = r.rbegin()->first;
  std::vector<std::size_t> rv;
  for (int n = lo; n <= hi; ++n) rv.push_back(r.count(n) ? r[n] : 0);
  std::map<int, Matrix> d;
  if (j.contains("diffs")) {
    const json& diffs = j["diffs"];
    if (!diffs.is_object()) fail_parse(path + ".diffs", "expected degree -> matrix");
    for (auto it = diffs.begin(); it != diffs.end(); ++it) {
      const std::string dp = path + ".diffs." + it.key();
      int n = as_degree(it.key(), path + ".diffs");
      if (n <= lo || n > hi) fail_parse(dp, "differential outside the degree range");
      d.emplace(n, as_matrix(ring, it.value(), rv[n - 1 - lo], rv[n - lo], dp));
    }
  }
  for (int n = lo + 1; n <= hi; ++n)
    if (!d.count(n)) d.emplace(n, Matrix(ring, rv[n - 1 - lo], rv[n - lo]));
  ChainComplex x(ring, lo, rv, d);
  for (int n = lo + 2; n <= hi; ++n)
    if (!(x.diff(n - 1) * x.diff(n)).is_zero())
      throw ValidationError("complex '" + name + "': d∘d ≠ 0 at degree " + std::to_string(n));
  return x;
}

void check_map(const std::string& what, const ChainMap& f) {
  const auto& x = f.source();
  const auto& y = f.target();
  int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi());
  for (int n = lo; n <= hi + 1; ++n)
    if (!(y.diff(n) * f.comp(n) == f.comp(n - 1) * x.diff(n)))
      throw ValidationError(what + ": square fails at degree " + std::to_string(n));
}

}  // namespace

bool Workspace::has(const std::string& name) const {
  return complexes.count(name) || maps.count(name) || towers.count(name) || promaps.count(name);
}

namespace {
template <class M>
const typename M::mapped_type& lookup(const M& m, const std::string& name, const char* kind) {
  auto it = m.find(name);
  if (it == m.end()) throw ValidationError(std::string("no ") + kind + " named '" + name + "'");
  return it->second;
}
}  // namespace

const ChainComplex& Workspace::complex(const std::string& n) const { return lookup(complexes, n, "complex"); }
const ChainMap& Workspace::map(const std::string& n) const { return lookup(maps, n, "map"); }
const ComplexTower& Workspace::tower(const std::string& n) const { return lookup(towers, n, "tower"); }
const ComplexProMap& Workspace::promap(const std::string& n) const { return lookup(promaps, n, "pro-map"); }

void Workspace::add_complex(const std::string& name, ChainComplex x) {
  if (has(name)) throw ValidationError("duplicate name '" + name + "'");
  complexes.emplace(name, std::move(x));
}

void Workspace::add_map(const std::string& name, const std::string& source, const std::string& target, ChainMap f) {
  if (has(name)) throw ValidationError("duplicate name '" + name + "'");
  maps.emplace(name, std::move(f));
  map_refs[name] = {source, target};
}

void Workspace::add_tower(const std::string& name, const ComplexTower& t) {
  if (has(name)) throw ValidationError("duplicate name '" + name + "'");
  TowerRefs refs;
  for (std::size_t s = 0; s < t.entries().size(); ++s) {
    refs.entries.push_back(name + "_" + std::to_string(s));
    add_complex(refs.entries.back(), t.entries()[s]);
  }
  for (std::size_t s = 0; s < t.structure().size(); ++s) {
    std::string m = name + "_map_" + std::to_string(s);
    add_map(m, refs.entries[s + 1], refs.entries[s], t.structure()[s]);
    refs.structure.push_back(m);
  }
  if (t.endo()) {
    refs.endo = name + "_endo";
    add_map(refs.endo, refs.entries.back(), refs.entries.back(), *t.endo());
  }
  towers.emplace(name, t);
  tower_refs[name] = refs;
}

Workspace parse_workspace_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) fail_parse("<root>", "expected an object");
  Workspace ws;
  ws.ring = parse_ring(as_string(field(doc, "ring", "<root>"), "ring"));

  if (doc.contains("config")) {
    const json& c = doc["config"];
    auto budget = [&](const char* key, std::size_t& out) {
      if (!c.contains(key)) return;
      out = as_count(c[key], std::string("config.") + key);
      if (out == 0) throw ValidationError(std::string("config.") + key + " must be positive");
    };
    budget("budget_filler", ws.config.budget_filler);
    budget("budget_reindex", ws.config.budget_reindex);
    budget("lim_window", ws.config.lim_window);
  }

  if (doc.contains("complexes"))
    for (auto it = doc["complexes"].begin(); it != doc["complexes"].end(); ++it) {
      ChainComplex x;
      try {
        x = parse_complex(ws.ring, it.key(), it.value());
      } catch (const ShapeMismatch& e) {
        throw ValidationError("complex '" + it.key() + "': " + e.what());
      }
      ws.add_complex(it.key(), x);
    }

  if (doc.contains("maps"))
    for (auto it = doc["maps"].begin(); it != doc["maps"].end(); ++it) {
      const std::string path = "maps." + it.key();
      std::string s = as_string(field(it.value(), "source", path), path + ".source");
      std::string t = as_string(field(it.value(), "target", path), path + ".target");
      const ChainComplex& x = ws.complex(s);
      const ChainComplex& y = ws.complex(t);
      std::map<int, Matrix> comps;
      if (it.value().contains("comps")) {
        const json& cj = it.value()["comps"];
        for (auto c = cj.begin(); c != cj.end(); ++c) {
          int n = as_degree(c.key(), path + ".comps");
          comps.emplace(n, as_matrix(ws.ring, c.value(), y.rank(n), x.rank(n), path + ".comps." + c.key()));
        }
      }
      for (int n = x.lo(); n <= x.hi(); ++n)
        if (!comps.count(n)) comps.emplace(n, Matrix(ws.ring, y.rank(n), x.rank(n)));
      std::map<int, Matrix> kept;
      for (auto& [n, m] : comps)
        if (n >= x.lo() && n <= x.hi()) kept.emplace(n, m);
        else if (!m.is_zero()) fail_parse(path + ".comps." + std::to_string(n), "component outside the source range");
      ChainMap f(x, y, kept);
      check_map("map '" + it.key() + "'", f);
      ws.add_map(it.key(), s, t, f);
    }

  if (doc.contains("towers"))
    for (auto it = doc["towers"].begin(); it != doc["towers"].end(); ++it) {
      const std::string path = "towers." + it.key();
      Workspace::TowerRefs refs;
      std::vector<ChainComplex> entries;
      std::vector<ChainMap> structure;
      for (const auto& e : field(it.value(), "entries", path)) {
        refs.entries.push_back(as_string(e, path + ".entries"));
        entries.push_back(ws.complex(refs.entries.back()));
      }
      if (entries.empty()) fail_parse(path + ".entries", "a tower needs at least one entry");
      if (it.value().contains("structure"))
        for (const auto& m : it.value()["structure"]) {
          refs.structure.push_back(as_string(m, path + ".structure"));
          structure.push_back(ws.map(refs.structure.back()));
        }
      if (structure.size() + 1 != entries.size())
        throw ValidationError("tower '" + it.key() + "': needs one structure map per step");
      for (std::size_t s = 0; s < structure.size(); ++s)
        if (!(structure[s].source() == entries[s + 1]) || !(structure[s].target() == entries[s]))
          throw ValidationError("tower '" + it.key() + "': structure map " + std::to_string(s) +
                                " must go from entry " + std::to_string(s + 1) + " to entry " + std::to_string(s));
      const json& tail = field(it.value(), "tail", path);
      std::string kind = as_string(field(tail, "kind", path + ".tail"), path + ".tail.kind");
      if (tail.contains("from") && as_count(tail["from"], path + ".tail.from") != entries.size() - 1)
        throw ValidationError("tower '" + it.key() + "': tail must start at the last entry");
      std::optional<ChainMap> endo;
      TailKind tk;
      if (kind == "constant_from") {
        tk = TailKind::ConstantFrom;
      } else if (kind == "repeat_from") {
        tk = TailKind::RepeatFrom;
        refs.endo = as_string(field(tail, "endo", path + ".tail"), path + ".tail.endo");
        endo = ws.map(refs.endo);
        if (!(endo->source() == entries.back()) || !(endo->target() == entries.back()))
          throw ValidationError("tower '" + it.key() + "': tail endomorphism must act on the last entry");
      } else {
        fail_parse(path + ".tail.kind", "expected constant_from or repeat_from");
      }
      if (ws.has(it.key())) throw ValidationError("duplicate name '" + it.key() + "'");
      ws.towers.emplace(it.key(), ComplexTower(entries, structure, tk, endo));
      ws.tower_refs[it.key()] = refs;
    }

  if (doc.contains("promaps"))
    for (auto it = doc["promaps"].begin(); it != doc["promaps"].end(); ++it) {
      const std::string path = "promaps." + it.key();
      Workspace::ProMapRefs refs;
      refs.source = as_string(field(it.value(), "source", path), path + ".source");
      refs.target = as_string(field(it.value(), "target", path), path + ".target");
      ComplexProMap f;
      f.source = ws.tower(refs.source);
      f.target = ws.tower(refs.target);
      for (const auto& c : field(it.value(), "comps", path)) {
        refs.comps.push_back(as_string(c, path + ".comps"));
        f.comps.push_back(ws.map(refs.comps.back()));
      }
      if (f.comps.empty()) fail_parse(path + ".comps", "needs at least one component");
      if (it.value().contains("shift")) {
        for (const auto& s : it.value()["shift"]) f.shift.push_back(as_count(s, path + ".shift"));
      } else {
        for (std::size_t t = 0; t < f.comps.size(); ++t) f.shift.push_back(t);
      }
      f.slope = it.value().contains("slope") ? as_count(it.value()["slope"], path + ".slope") : 1;
      if (f.shift.size() != f.comps.size()) throw ValidationError("pro-map '" + it.key() + "': shift and comps differ in length");
      for (std::size_t t = 0; t < f.comps.size(); ++t)
        if (!(f.comps[t].source() == f.source.at(f.shift[t])) || !(f.comps[t].target() == f.target.at(t)))
          throw ValidationError("pro-map '" + it.key() + "': component " + std::to_string(t) + " has the wrong ends");
      bool ok = false;
      try {
        ok = validate(f);
      } catch (const Error&) {
      }
      if (!ok) throw ValidationError("pro-map '" + it.key() + "': compatibility squares do not commute");
      if (ws.has(it.key())) throw ValidationError("duplicate name '" + it.key() + "'");
      ws.promaps.emplace(it.key(), f);
      ws.promap_refs[it.key()] = refs;
    }
  return ws;
}

Workspace parse_workspace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_workspace_text(ss.str());
}

std::string serialize_workspace(const Workspace& ws) {
  json doc;
  doc["ring"] = ws.ring.name();
  doc["config"] = {{"budget_filler", ws.config.budget_filler},
                   {"budget_reindex", ws.config.budget_reindex},
                   {"lim_window", ws.config.lim_window}};
  json cx = json::object();
  for (const auto& [name, x] : ws.complexes) {
    json ranks = json::object(), diffs = json::object();
    if (!x.is_zero() || x.lo() != 0 || x.hi() != 0) {
      for (int n = x.lo(); n <= x.hi(); ++n) ranks[std::to_string(n)] = x.rank(n);
      for (int n = x.lo() + 1; n <= x.hi(); ++n)
        if (x.rank(n) > 0 && x.rank(n - 1) > 0) diffs[std::to_string(n)] = matrix_json(x.diff(n));
    }
    cx[name] = {{"ranks", ranks}, {"diffs", diffs}};
  }
  doc["complexes"] = cx;
  json mp = json::object();
  for (const auto& [name, f] : ws.maps) {
    json comps = json::object();
    for (int n = f.source().lo(); n <= f.source().hi(); ++n)
      if (f.source().rank(n) > 0 && f.target().rank(n) > 0) comps[std::to_string(n)] = matrix_json(f.comp(n));
    const auto& refs = ws.map_refs.at(name);
    mp[name] = {{"source", refs.source}, {"target", refs.target}, {"comps", comps}};
  }
  doc["maps"] = mp;
  json tw = json::object();
  for (const auto& [name, t] : ws.towers) {
    const auto& refs = ws.tower_refs.at(name);
    json tail = {{"kind", t.tail_kind() == TailKind::ConstantFrom ? "constant_from" : "repeat_from"},
                 {"from", t.tail_start()}};
    if (t.endo()) tail["endo"] = refs.endo;
    tw[name] = {{"entries", refs.entries}, {"structure", refs.structure}, {"tail", tail}};
  }
  doc["towers"] = tw;
  json pm = json::object();
  for (const auto& [name, f] : ws.promaps) {
    const auto& refs = ws.promap_refs.at(name);
    pm[name] = {{"source", refs.source}, {"target", refs.target}, {"comps", refs.comps},
                {"shift", f.shift}, {"slope", f.slope}};
  }
  doc["promaps"] = pm;
  return doc.dump(2) + "\n";
}

AbGroup parse_group(const Ring& ring, const std::string& text) {
  Vec torsion;
  std::size_t free = 0;
  std::stringstream ss(text);
  std::string term;
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
  };
  const std::string ring_tag = ring.name();
  while (std::getline(ss, term, '+')) {
    term = trim(term);
    if (term == "0") continue;
    auto power = [&](const std::string& base) -> std::optional<std::size_t> {
      if (term == base) return 1;
      if (term.rfind(base + "^", 0) == 0) {
        try {
          return std::stoul(term.substr(base.size() + 1));
        } catch (const std::exception&) {
        }
      }
      return std::nullopt;
    };
    if (auto k = power(ring_tag)) {
      free += *k;
    } else if (!ring.is_field() && term.rfind("Z/", 0) == 0) {
      mpz_class d;
      if (d.set_str(term.substr(2), 10) != 0 || d < 2) throw ParseError("group term '" + term + "'");
      torsion.push_back(d);
    } else {
      throw ParseError("group term '" + term + "' over " + ring_tag);
    }
  }
  if (torsion.empty()) return AbGroup::free(ring, free);
  // Arbitrary cyclic orders: present as a diagonal relation matrix and normalize.
  std::size_t n = torsion.size() + free;
  Matrix rel(ring, n, torsion.size());
  for (std::size_t i = 0; i < torsion.size(); ++i) rel.set(i, i, torsion[i]);
  return AbGroup::from_presentation(ring, n, rel);
}

}  // namespace tmodel
