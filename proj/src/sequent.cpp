#include "lbiq/sequent.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "lbiq/lexer.hpp"

namespace lbiq {

bool operator==(const RelAtom& a, const RelAtom& b) { return a.from == b.from && a.to == b.to; }
bool operator<(const RelAtom& a, const RelAtom& b) {
  return a.from != b.from ? a.from < b.from : a.to < b.to;
}
bool operator==(const DomAtom& a, const DomAtom& b) { return a.label == b.label && a.var == b.var; }
bool operator<(const DomAtom& a, const DomAtom& b) {
  return a.label != b.label ? a.label < b.label : a.var < b.var;
}

LFormula::LFormula(Label l, Formula f) : label(std::move(l)), f(std::move(f)) {
  key = alpha_key(this->f);
  text = lbiq::to_string(this->f);
}

bool operator==(const LFormula& a, const LFormula& b) { return a.label == b.label && a.key == b.key; }
bool operator<(const LFormula& a, const LFormula& b) {
  if (a.label != b.label) return a.label < b.label;
  if (a.key != b.key) return a.key < b.key;
  return a.text < b.text;
}

std::string to_string(const LFormula& lf) { return lf.label + ": " + lf.text; }

void Sequent::normalize() {
  std::sort(R.begin(), R.end());
  std::sort(T.begin(), T.end());
  std::stable_sort(G.begin(), G.end());
  std::stable_sort(D.begin(), D.end());
}

void Sequent::add(Side s, const LFormula& lf) {
  auto& v = side(s);
  v.insert(std::upper_bound(v.begin(), v.end(), lf), lf);
}

bool Sequent::remove(Side s, const LFormula& lf) {
  auto& v = side(s);
  auto it = std::find(v.begin(), v.end(), lf);
  if (it == v.end()) return false;
  v.erase(it);
  return true;
}

int Sequent::count(Side s, const LFormula& lf) const {
  const auto& v = side(s);
  return static_cast<int>(std::count(v.begin(), v.end(), lf));
}

void Sequent::add_rel(const Label& from, const Label& to) {
  RelAtom r{from, to};
  R.insert(std::upper_bound(R.begin(), R.end(), r), r);
}

bool Sequent::remove_rel(const Label& from, const Label& to) {
  auto it = std::find(R.begin(), R.end(), RelAtom{from, to});
  if (it == R.end()) return false;
  R.erase(it);
  return true;
}

void Sequent::add_dom(const Label& l, const std::string& x) {
  DomAtom d{l, x};
  T.insert(std::upper_bound(T.begin(), T.end(), d), d);
}

bool Sequent::remove_dom(const Label& l, const std::string& x) {
  auto it = std::find(T.begin(), T.end(), DomAtom{l, x});
  if (it == T.end()) return false;
  T.erase(it);
  return true;
}

int Sequent::count_dom(const Label& l, const std::string& x) const {
  return static_cast<int>(std::count(T.begin(), T.end(), DomAtom{l, x}));
}

bool operator==(const Sequent& a, const Sequent& b) {
  return a.R == b.R && a.T == b.T && a.G == b.G && a.D == b.D;
}

std::set<Label> labels(const Sequent& s) {
  std::set<Label> out;
  for (const auto& r : s.R) out.insert(r.from), out.insert(r.to);
  for (const auto& d : s.T) out.insert(d.label);
  for (const auto& lf : s.G) out.insert(lf.label);
  for (const auto& lf : s.D) out.insert(lf.label);
  return out;
}

std::set<std::string> vars(const Sequent& s) {
  std::set<std::string> out;
  for (const auto& d : s.T) out.insert(d.var);
  for (const auto* side : {&s.G, &s.D})
    for (const auto& lf : *side) {
      auto fv = free_vars(lf.f);
      out.insert(fv.begin(), fv.end());
    }
  return out;
}

Signature signature_of(const Sequent& s) {
  Signature sig;
  for (const auto* side : {&s.G, &s.D})
    for (const auto& lf : *side) sig.merge(signature_of(lf.f));
  return sig;
}

Validation validate(const Sequent& s) {
  std::set<Label> all = labels(s);
  if (all.empty()) return {false, "empty sequent has no label"};
  if (s.R.empty()) {
    if (all.size() != 1) {
      std::string names;
      for (const auto& l : all) names += (names.empty() ? "" : ", ") + l;
      return {false, "no relational atoms but several labels: " + names};
    }
    return {};
  }
  std::set<Label> rl;
  for (const auto& r : s.R) rl.insert(r.from), rl.insert(r.to);
  for (const auto& l : all)
    if (!rl.count(l)) return {false, "label " + l + " does not occur in R"};

  for (const auto& r : s.R)
    if (r.from == r.to) return {false, "directed cycle: " + r.from + "<" + r.to};

  // Directed cycle search by DFS colouring.
  std::map<Label, std::vector<Label>> succ, nbr;
  for (const auto& r : s.R) {
    succ[r.from].push_back(r.to);
    nbr[r.from].push_back(r.to);
    nbr[r.to].push_back(r.from);
  }
  std::map<Label, int> colour;
  std::vector<Label> stack;
  std::string cycle;
  std::function<bool(const Label&)> dfs = [&](const Label& v) {
    colour[v] = 1;
    stack.push_back(v);
    for (const auto& n : succ[v]) {
      if (colour[n] == 1) {
        auto it = std::find(stack.begin(), stack.end(), n);
        for (; it != stack.end(); ++it) cycle += *it + "<";
        cycle += n;
        return true;
      }
      if (colour[n] == 0 && dfs(n)) return true;
    }
    stack.pop_back();
    colour[v] = 2;
    return false;
  };
  for (const auto& l : rl)
    if (colour[l] == 0 && dfs(l)) return {false, "directed cycle: " + cycle};

  // Connectivity ignoring orientation.
  std::set<Label> seen{*rl.begin()};
  std::deque<Label> q{*rl.begin()};
  while (!q.empty()) {
    Label v = q.front();
    q.pop_front();
    for (const auto& n : nbr[v])
      if (seen.insert(n).second) q.push_back(n);
  }
  for (const auto& l : rl)
    if (!seen.count(l)) return {false, "disconnected: " + l + " is not connected to " + *rl.begin()};

  if (s.R.size() != rl.size() - 1) {
    std::set<std::pair<Label, Label>> und;
    for (const auto& r : s.R) {
      auto e = std::minmax(r.from, r.to);
      if (!und.insert({e.first, e.second}).second)
        return {false, "undirected cycle through the parallel edges " + r.from + "<" + r.to};
    }
    return {false, "undirected cycle: " + std::to_string(s.R.size()) + " edges over " +
                       std::to_string(rl.size()) + " labels"};
  }
  return {};
}

bool strictly_reachable(const std::vector<RelAtom>& R, const Label& w, const Label& u) {
  std::set<Label> seen;
  std::deque<Label> q{w};
  while (!q.empty()) {
    Label v = q.front();
    q.pop_front();
    for (const auto& r : R) {
      if (r.from != v) continue;
      if (r.to == u) return true;
      if (seen.insert(r.to).second) q.push_back(r.to);
    }
  }
  return false;
}

bool reachable(const std::vector<RelAtom>& R, const Label& w, const Label& u) {
  return w == u || strictly_reachable(R, w, u);
}

Reach::Reach(const Sequent& s) {
  auto ls = lbiq::labels(s);
  labels_.assign(ls.begin(), ls.end());
  std::size_t n = labels_.size();
  succ_.assign(n, {});
  for (const auto& r : s.R) succ_[index(r.from)].push_back(index(r.to));
  m_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    std::deque<int> q{static_cast<int>(i)};
    m_[i][i] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int nx : succ_[v])
        if (!m_[i][nx]) m_[i][nx] = true, q.push_back(nx);
    }
  }
}

int Reach::index(const Label& l) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
  if (it == labels_.end() || *it != l) return -1;
  return static_cast<int>(it - labels_.begin());
}

bool Reach::reachable(const Label& w, const Label& u) const {
  if (w == u) return true;
  int i = index(w), j = index(u);
  return i >= 0 && j >= 0 && m_[i][j];
}

std::vector<Label> Reach::from(const Label& w) const {
  std::vector<Label> out;
  int i = index(w);
  if (i < 0) return out;
  for (std::size_t j = 0; j < labels_.size(); ++j)
    if (m_[i][j]) out.push_back(labels_[j]);
  return out;
}

std::vector<Label> Reach::to(const Label& u) const {
  std::vector<Label> out;
  int j = index(u);
  if (j < 0) return out;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (m_[i][j]) out.push_back(labels_[i]);
  return out;
}

std::vector<Label> Reach::path(const Label& w, const Label& u) const {
  int i = index(w), j = index(u);
  if (i < 0 || j < 0 || !m_[i][j]) return {};
  std::vector<int> parent(labels_.size(), -1);
  std::deque<int> q{i};
  parent[i] = i;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (v == j) break;
    for (int nx : succ_[v])
      if (parent[nx] < 0) parent[nx] = v, q.push_back(nx);
  }
  std::vector<Label> out;
  for (int v = j;; v = parent[v]) {
    out.push_back(labels_[v]);
    if (v == i) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::set<std::string> available_vars(const Sequent& s, const Label& w) {
  if (!labels(s).count(w)) throw std::invalid_argument("unknown label " + w);
  std::set<std::string> out;
  for (const auto& d : s.T)
    if (reachable(s.R, d.label, w)) out.insert(d.var);
  return out;
}

bool is_available(const Term& t, const Sequent& s, const Label& w) {
  auto x = available_vars(s, w);
  for (const auto& v : vt(t))
    if (!x.count(v)) return false;
  return true;
}

Sequent sequent_subst(const Sequent& s, const Term& t, const std::string& x) {
  Sequent out;
  out.R = s.R;
  auto tv = vt(t);
  for (const auto& d : s.T) {
    if (d.var != x) {
      out.T.push_back(d);
      continue;
    }
    for (const auto& y : tv) out.T.push_back({d.label, y});
  }
  for (const auto& lf : s.G) out.G.emplace_back(lf.label, subst(lf.f, t, x));
  for (const auto& lf : s.D) out.D.emplace_back(lf.label, subst(lf.f, t, x));
  out.normalize();
  return out;
}

Sequent rename_label(const Sequent& s, const Label& from, const Label& to) {
  auto m = [&](const Label& l) { return l == from ? to : l; };
  Sequent out;
  for (const auto& r : s.R) out.R.push_back({m(r.from), m(r.to)});
  for (const auto& d : s.T) out.T.push_back({m(d.label), d.var});
  for (const auto& lf : s.G) {
    LFormula c = lf;
    c.label = m(lf.label);
    out.G.push_back(std::move(c));
  }
  for (const auto& lf : s.D) {
    LFormula c = lf;
    c.label = m(lf.label);
    out.D.push_back(std::move(c));
  }
  out.normalize();
  return out;
}

Sequent rename_var(const Sequent& s, const std::string& from, const std::string& to) {
  Sequent out;
  out.R = s.R;
  for (const auto& d : s.T) out.T.push_back({d.label, d.var == from ? to : d.var});
  Term t = Term::var(to);
  for (const auto& lf : s.G) out.G.emplace_back(lf.label, subst(lf.f, t, from));
  for (const auto& lf : s.D) out.D.emplace_back(lf.label, subst(lf.f, t, from));
  out.normalize();
  return out;
}

namespace {

struct LabelProfile {
  int out = 0, in = 0, t = 0, g = 0, d = 0;
  bool operator==(const LabelProfile&) const = default;
};

std::map<Label, LabelProfile> profiles(const Sequent& s) {
  std::map<Label, LabelProfile> p;
  for (const auto& l : labels(s)) p[l];
  for (const auto& r : s.R) p[r.from].out++, p[r.to].in++;
  for (const auto& d : s.T) p[d.label].t++;
  for (const auto& lf : s.G) p[lf.label].g++;
  for (const auto& lf : s.D) p[lf.label].d++;
  return p;
}

Sequent apply_map(const Sequent& s, const std::map<Label, Label>& m) {
  // Two-phase rename through placeholder names so that permutations do not collide.
  Sequent out = s;
  for (const auto& [a, b] : m) out = rename_label(out, a, "\x01" + b);
  for (const auto& [a, b] : m) out = rename_label(out, "\x01" + b, b);
  return out;
}

}  // namespace

std::optional<std::map<Label, Label>> iso(const Sequent& s1, const Sequent& s2) {
  if (s1.R.size() != s2.R.size() || s1.T.size() != s2.T.size() || s1.G.size() != s2.G.size() ||
      s1.D.size() != s2.D.size())
    return std::nullopt;
  auto p1 = profiles(s1), p2 = profiles(s2);
  if (p1.size() != p2.size()) return std::nullopt;
  std::vector<Label> l1, l2;
  for (const auto& [l, _] : p1) l1.push_back(l);
  for (const auto& [l, _] : p2) l2.push_back(l);
  std::map<Label, Label> m;
  std::vector<bool> used(l2.size(), false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == l1.size()) return apply_map(s1, m) == s2;
    for (std::size_t j = 0; j < l2.size(); ++j) {
      if (used[j] || !(p1[l1[i]] == p2[l2[j]])) continue;
      used[j] = true;
      m[l1[i]] = l2[j];
      if (go(i + 1)) return true;
      used[j] = false;
    }
    m.erase(l1[i]);
    return false;
  };
  if (go(0)) return m;
  return std::nullopt;
}

Label fresh_label(const std::set<Label>& avoid, const std::string& stem) {
  for (int k = 1;; ++k) {
    Label cand = stem + std::to_string(k);
    if (!avoid.count(cand)) return cand;
  }
}

std::string fresh_variable(const Sequent& s, const std::string& base) {
  auto avoid = vars(s);
  if (!avoid.count(base)) return base;
  for (const auto* side : {&s.G, &s.D})
    for (const auto& lf : *side) {
      auto av = all_vars(lf.f);
      avoid.insert(av.begin(), av.end());
    }
  return fresh_var(base, avoid);
}

std::string to_string(const Sequent& s) {
  std::string out;
  if (!s.R.empty()) {
    out += "R: ";
    for (std::size_t i = 0; i < s.R.size(); ++i) out += (i ? ", " : "") + s.R[i].from + "<" + s.R[i].to;
    out += " ; ";
  }
  if (!s.T.empty()) {
    out += "T: ";
    for (std::size_t i = 0; i < s.T.size(); ++i) out += (i ? ", " : "") + s.T[i].label + ":" + s.T[i].var;
    out += " ; ";
  }
  for (std::size_t i = 0; i < s.G.size(); ++i) out += (i ? ", " : "") + to_string(s.G[i]);
  out += s.G.empty() ? "|-" : " |-";
  for (std::size_t i = 0; i < s.D.size(); ++i) out += (i ? ", " : " ") + to_string(s.D[i]);
  return out;
}

Sequent parse_sequent(std::string_view text, Signature& sig, bool extend) {
  Lexer lx(text);
  FormulaParser fp(lx, sig, extend);
  Sequent s;
  auto segment_header = [&](const char* name) {
    return lx.peek().kind == Tok::Ident && lx.peek().text == name && lx.peek2().kind == Tok::Colon;
  };
  if (segment_header("R")) {
    lx.next(), lx.next();
    do {
      Label a = lx.expect(Tok::Ident, "label").text;
      lx.expect(Tok::Lt, "'<'");
      Label b = lx.expect(Tok::Ident, "label").text;
      s.R.push_back({a, b});
    } while (lx.accept(Tok::Comma));
    lx.expect(Tok::Semi, "';'");
  }
  if (segment_header("T")) {
    lx.next(), lx.next();
    do {
      Label a = lx.expect(Tok::Ident, "label").text;
      lx.expect(Tok::Colon, "':'");
      std::string x = lx.expect(Tok::Ident, "variable").text;
      s.T.push_back({a, x});
    } while (lx.accept(Tok::Comma));
    lx.expect(Tok::Semi, "';'");
  }
  auto labeled_list = [&](std::vector<LFormula>& out) {
    do {
      Label l = lx.expect(Tok::Ident, "label").text;
      lx.expect(Tok::Colon, "':'");
      out.emplace_back(l, fp.formula());
    } while (lx.accept(Tok::Comma));
  };
  if (lx.peek().kind != Tok::Turnstile) labeled_list(s.G);
  lx.expect(Tok::Turnstile, "'|-'");
  if (!lx.at_end()) labeled_list(s.D);
  if (!lx.at_end()) throw ParseError("trailing input '" + lx.peek().text + "'", lx.pos());
  s.normalize();
  return s;
}

Sequent parse_sequent(std::string_view text) {
  Signature sig;
  return parse_sequent(text, sig, true);
}

}  // namespace lbiq
