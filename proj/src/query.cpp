#include "provfact/query.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "provfact/error.hpp"

namespace provfact {

Query::Query(std::string name, std::vector<Atom> atoms, const ParseOptions& opts)
    : name_(std::move(name)), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw SyntaxError("query has no atoms");
  std::set<std::string> relations;
  for (const auto& a : atoms_) {
    if (a.vars.empty()) throw SyntaxError("atom " + a.relation + " has no variables");
    if (!relations.insert(a.relation).second)
      throw SelfJoinError("relation " + a.relation + " occurs more than once");
  }
  for (const auto& a : atoms_) {
    std::vector<int> idx;
    VarSet mask = 0;
    for (const auto& v : a.vars) {
      int i = var_index(v);
      if (i < 0) {
        if (vars_.size() >= kMaxQueryVars)
          throw TooManyVariables("more than " + std::to_string(kMaxQueryVars) + " variables");
        vars_.push_back(v);
        i = static_cast<int>(vars_.size()) - 1;
      }
      if ((mask >> i) & 1u) {
        if (!opts.allow_duplicate_vars)
          throw SyntaxError("variable " + v + " repeated in atom " + a.relation);
      }
      mask |= VarSet{1} << i;
      idx.push_back(i);
    }
    atom_masks_.push_back(mask);
    atom_var_idx_.push_back(std::move(idx));
  }
  if (!opts.allow_disconnected && !connected())
    throw DisconnectedQuery("query " + name_ + " is not connected");
}

int Query::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return static_cast<int>(i);
  return -1;
}

VarSet Query::all_vars() const {
  VarSet s = 0;
  for (auto m : atom_masks_) s |= m;
  return s;
}

std::optional<std::size_t> Query::atom_index(std::string_view relation) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].relation == relation) return i;
  return std::nullopt;
}

bool Query::connected() const {
  if (atoms_.empty()) return true;
  VarSet reached = atom_masks_[0];
  std::vector<bool> done(atoms_.size(), false);
  done[0] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!done[i] && (atom_masks_[i] & reached)) {
        done[i] = true;
        reached |= atom_masks_[i];
        grew = true;
      }
    }
  }
  return std::all_of(done.begin(), done.end(), [](bool b) { return b; });
}

std::string Query::to_string() const {
  std::string out = name_ + " :- ";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out += ", ";
    out += atoms_[i].relation + "(";
    for (std::size_t j = 0; j < atoms_[i].vars.size(); ++j) {
      if (j) out += ",";
      out += atoms_[i].vars[j];
    }
    out += ")";
  }
  return out;
}

namespace {

class Lexer {
 public:
  explicit Lexer(std::string text) : text_(std::move(text)) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return text_.substr(start, pos_ - start);
  }
  // A term in argument position; constants are rejected.
  std::string variable() {
    skip_ws();
    if (pos_ < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_])))
      return identifier();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')') ++pos_;
    std::string term = text_.substr(start, pos_ - start);
    pos_ = start;
    fail("constant or invalid term '" + term + "' (only lowercase variables are allowed)");
  }
  [[noreturn]] void fail(const std::string& what) {
    throw SyntaxError(what + " at offset " + std::to_string(pos_));
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

Query parse_query(std::string_view text, const ParseOptions& opts) {
  std::string body;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    body += line;
    body += ' ';
  }
  Lexer lex(body);
  if (lex.at_end()) throw SyntaxError("empty query text");
  std::string name = lex.identifier();
  if (lex.accept("(")) {
    if (!lex.accept(")")) throw HeadVarError("query " + name + " has head variables");
  }
  lex.expect(":-");
  std::vector<Atom> atoms;
  do {
    Atom a;
    a.relation = lex.identifier();
    lex.expect("(");
    if (!lex.accept(")")) {
      do {
        a.vars.push_back(lex.variable());
      } while (lex.accept(","));
      lex.expect(")");
    }
    atoms.push_back(std::move(a));
  } while (lex.accept(","));
  lex.accept(".");
  if (!lex.at_end()) lex.fail("trailing input");
  return Query(std::move(name), std::move(atoms), opts);
}

Query load_query(const std::filesystem::path& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read query file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_query(ss.str(), opts);
}

std::vector<std::size_t> atoms_of(const Query& q, std::string_view x) {
  int i = q.var_index(x);
  if (i < 0) throw UnknownVariable("unknown variable " + std::string(x));
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < q.atom_count(); ++a)
    if ((q.atom_vars(a) >> i) & 1u) out.push_back(a);
  return out;
}

namespace {

// Bitmask of atoms containing each variable.
std::vector<std::uint64_t> atom_sets(const Query& q) {
  std::vector<std::uint64_t> at(q.var_count(), 0);
  for (std::size_t a = 0; a < q.atom_count(); ++a)
    for (std::size_t v = 0; v < q.var_count(); ++v)
      if ((q.atom_vars(a) >> v) & 1u) at[v] |= std::uint64_t{1} << a;
  return at;
}

// BFS over the atom-variable incidence graph with variables in `blocked` removed.
bool atoms_linked(const Query& q, std::size_t from, std::size_t to, VarSet blocked) {
  std::vector<bool> seen(q.atom_count(), false);
  std::queue<std::size_t> todo;
  seen[from] = true;
  todo.push(from);
  while (!todo.empty()) {
    std::size_t a = todo.front();
    todo.pop();
    if (a == to) return true;
    VarSet open = q.atom_vars(a) & ~blocked;
    for (std::size_t b = 0; b < q.atom_count(); ++b) {
      if (!seen[b] && (q.atom_vars(b) & open)) {
        seen[b] = true;
        todo.push(b);
      }
    }
  }
  return false;
}

}  // namespace

bool is_hierarchical(const Query& q) {
  auto at = atom_sets(q);
  for (std::size_t i = 0; i < at.size(); ++i)
    for (std::size_t j = i + 1; j < at.size(); ++j) {
      auto common = at[i] & at[j];
      if (common != 0 && common != at[i] && common != at[j]) return false;
    }
  return true;
}

std::vector<std::size_t> independent_atoms(const Query& q) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < q.atom_count(); ++g) {
    bool independent = true;
    for (std::size_t h = 0; h < q.atom_count() && independent; ++h) {
      if (h == g) continue;
      VarSet a = q.atom_vars(h), b = q.atom_vars(g);
      if ((a & b) == a && a != b) independent = false;
    }
    if (independent) out.push_back(g);
  }
  return out;
}

bool has_equal_var_sets(const Query& q) {
  for (std::size_t i = 0; i < q.atom_count(); ++i)
    for (std::size_t j = i + 1; j < q.atom_count(); ++j)
      if (q.atom_vars(i) == q.atom_vars(j)) return true;
  return false;
}

std::optional<std::array<std::size_t, 3>> has_triad(const Query& q) {
  auto ind = independent_atoms(q);
  for (std::size_t i = 0; i < ind.size(); ++i)
    for (std::size_t j = i + 1; j < ind.size(); ++j)
      for (std::size_t k = j + 1; k < ind.size(); ++k) {
        std::size_t a = ind[i], b = ind[j], c = ind[k];
        if (atoms_linked(q, a, b, q.atom_vars(c)) && atoms_linked(q, b, c, q.atom_vars(a)) &&
            atoms_linked(q, a, c, q.atom_vars(b)))
          return std::array<std::size_t, 3>{a, b, c};
      }
  return std::nullopt;
}

bool is_linear(const Query& q) { return !has_triad(q).has_value(); }

std::vector<Query> connected_components(const Query& q) {
  std::vector<int> comp(q.atom_count(), -1);
  int count = 0;
  for (std::size_t s = 0; s < q.atom_count(); ++s) {
    if (comp[s] >= 0) continue;
    VarSet reached = q.atom_vars(s);
    comp[s] = count;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t a = 0; a < q.atom_count(); ++a)
        if (comp[a] < 0 && (q.atom_vars(a) & reached)) {
          comp[a] = count;
          reached |= q.atom_vars(a);
          grew = true;
        }
    }
    ++count;
  }
  std::vector<Query> out;
  for (int c = 0; c < count; ++c) {
    std::vector<Atom> atoms;
    for (std::size_t a = 0; a < q.atom_count(); ++a)
      if (comp[a] == c) atoms.push_back(q.atom(a));
    ParseOptions opts;
    opts.allow_duplicate_vars = true;
    std::string name = count == 1 ? q.name() : q.name() + "#" + std::to_string(c + 1);
    out.emplace_back(name, std::move(atoms), opts);
  }
  return out;
}

std::vector<std::string> var_names(const Query& q, VarSet s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < q.var_count(); ++i)
    if ((s >> i) & 1u) out.push_back(q.var_name(static_cast<int>(i)));
  return out;
}

}  // namespace provfact
