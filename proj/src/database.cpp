#include "provfact/database.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include <boost/dynamic_bitset.hpp>

#include "provfact/error.hpp"

namespace provfact {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string row_key(const std::vector<int>& values) {
  std::string key;
  key.reserve(values.size() * sizeof(int));
  for (int v : values) key.append(reinterpret_cast<const char*>(&v), sizeof v);
  return key;
}

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
    return h;
  }
};

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

int Database::intern(std::string_view constant) {
  auto it = constant_ids_.find(std::string(constant));
  if (it != constant_ids_.end()) return it->second;
  int id = static_cast<int>(constants_.size());
  constants_.emplace_back(constant);
  constant_ids_.emplace(constants_.back(), id);
  return id;
}

std::optional<int> Database::find_constant(std::string_view constant) const {
  auto it = constant_ids_.find(std::string(constant));
  if (it == constant_ids_.end()) return std::nullopt;
  return it->second;
}

Database::Relation& Database::ensure_relation(std::string_view name) {
  auto it = relation_index_.find(std::string(name));
  if (it != relation_index_.end()) return relations_[it->second];
  relation_index_.emplace(std::string(name), relations_.size());
  relations_.push_back({std::string(name), {}});
  row_index_.emplace_back();
  return relations_.back();
}

void Database::add_relation(std::string_view relation) { ensure_relation(relation); }

int Database::add_tuple(std::string_view relation, const std::vector<std::string>& values) {
  std::vector<int> ids;
  ids.reserve(values.size());
  for (const auto& v : values) ids.push_back(intern(v));
  return add_tuple_ids(relation, std::move(ids));
}

int Database::add_tuple_ids(std::string_view relation, std::vector<int> values) {
  auto& rel = ensure_relation(relation);
  std::size_t ri = relation_index_.at(std::string(relation));
  auto key = row_key(values);
  auto& index = row_index_[ri];
  auto it = index.find(key);
  if (it != index.end()) return it->second;
  int id = static_cast<int>(tuple_values_.size());
  tuple_values_.push_back(std::move(values));
  tuple_relation_.push_back(static_cast<int>(ri));
  rel.tuples.push_back(id);
  index.emplace(std::move(key), id);
  return id;
}

const Database::Relation* Database::relation(std::string_view name) const {
  auto it = relation_index_.find(std::string(name));
  return it == relation_index_.end() ? nullptr : &relations_[it->second];
}

std::string Database::tuple_label(int tuple) const {
  std::string name = relations_[tuple_relation_[tuple]].name;
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto& vals = tuple_values_[tuple];
  bool short_constants = std::all_of(vals.begin(), vals.end(),
                                     [&](int v) { return constants_[v].size() == 1; });
  std::string out = name + "_";
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i && !short_constants) out += '.';
    out += constants_[vals[i]];
  }
  return out;
}

void Database::write(std::ostream& out) const {
  for (const auto& rel : relations_) {
    out << '[' << rel.name << "]\n";
    for (int t : rel.tuples) {
      const auto& vals = tuple_values_[t];
      for (std::size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << constants_[vals[i]];
      out << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_row(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    auto f = trim(field);
    if (f.empty()) throw FormatError("empty field on line " + std::to_string(line_no));
    fields.push_back(f);
  }
  if (!line.empty() && line.back() == ',')
    throw FormatError("empty field on line " + std::to_string(line_no));
  return fields;
}

bool valid_relation_name(const std::string& name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

Database parse_database(std::string_view text) {
  Database db;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string current;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw FormatError("malformed section header on line " + std::to_string(line_no));
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!valid_relation_name(current))
        throw FormatError("invalid relation name on line " + std::to_string(line_no));
      db.add_relation(current);
      continue;
    }
    if (current.empty()) throw FormatError("row outside of a relation section on line " + std::to_string(line_no));
    db.add_tuple(current, split_row(line, line_no));
  }
  return db;
}

Database load_database(const std::filesystem::path& source) {
  namespace fs = std::filesystem;
  if (fs::is_directory(source)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(source))
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    Database db;
    for (const auto& f : files) {
      std::ifstream in(f);
      if (!in) throw IoError("cannot read " + f.string());
      std::string name = f.stem().string();
      if (!valid_relation_name(name)) throw FormatError("invalid relation file name " + f.string());
      db.add_relation(name);
      std::string raw;
      std::size_t line_no = 0;
      while (std::getline(in, raw)) {
        ++line_no;
        auto line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        db.add_tuple(name, split_row(line, line_no));
      }
    }
    return db;
  }
  std::ifstream in(source);
  if (!in) throw IoError("cannot read database " + source.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_database(ss.str());
}

bool constant_less(std::string_view a, std::string_view b) {
  if (all_digits(a) && all_digits(b)) {
    auto strip = [](std::string_view s) {
      std::size_t i = 0;
      while (i + 1 < s.size() && s[i] == '0') ++i;
      return s.substr(i);
    };
    auto x = strip(a), y = strip(b);
    if (x.size() != y.size()) return x.size() < y.size();
    if (x != y) return x < y;
    return a < b;
  }
  return a < b;
}

WitnessSet compute_witnesses(const Query& q, const Database& d) {
  const std::size_t nv = q.var_count();
  std::vector<Witness> partial(1);
  partial[0].binding.assign(nv, -1);
  std::vector<bool> bound(nv, false);
  for (std::size_t a = 0; a < q.atom_count(); ++a) {
    const auto& atom = q.atom(a);
    const auto& vars = q.atom_var_indices(a);
    const auto* rel = d.relation(atom.relation);
    if (!rel) return {};
    for (int t : rel->tuples)
      if (d.tuple_values(t).size() != vars.size())
        throw ArityMismatch("relation " + atom.relation + " has a row of arity " +
                            std::to_string(d.tuple_values(t).size()) + ", atom expects " +
                            std::to_string(vars.size()));
    // Positions whose variable is already bound form the join key.
    std::vector<std::size_t> key_pos;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (bound[vars[i]]) key_pos.push_back(i);
    std::unordered_map<std::vector<int>, std::vector<int>, VecHash> index;
    for (int t : rel->tuples) {
      const auto& vals = d.tuple_values(t);
      bool consistent = true;
      // Repeated variables within the atom must agree.
      for (std::size_t i = 0; i < vars.size() && consistent; ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
          if (vars[i] == vars[j] && vals[i] != vals[j]) consistent = false;
      if (!consistent) continue;
      std::vector<int> key;
      for (auto p : key_pos) key.push_back(vals[p]);
      index[key].push_back(t);
    }
    std::vector<Witness> next;
    for (const auto& w : partial) {
      std::vector<int> key;
      for (auto p : key_pos) key.push_back(w.binding[vars[p]]);
      auto it = index.find(key);
      if (it == index.end()) continue;
      for (int t : it->second) {
        Witness ext = w;
        const auto& vals = d.tuple_values(t);
        for (std::size_t i = 0; i < vars.size(); ++i) ext.binding[vars[i]] = vals[i];
        ext.tuples.push_back(t);
        next.push_back(std::move(ext));
      }
    }
    partial = std::move(next);
    for (int v : vars) bound[v] = true;
    if (partial.empty()) return {};
  }
  std::sort(partial.begin(), partial.end(), [&](const Witness& x, const Witness& y) {
    for (std::size_t i = 0; i < nv; ++i) {
      if (x.binding[i] == y.binding[i]) continue;
      return constant_less(d.constant(x.binding[i]), d.constant(y.binding[i]));
    }
    return false;
  });
  WitnessSet out;
  out.witnesses = std::move(partial);
  return out;
}

std::string render_witness(const Database& d, const Witness& w) {
  std::string out;
  for (std::size_t i = 0; i < w.tuples.size(); ++i) {
    if (i) out += ' ';
    out += d.tuple_label(w.tuples[i]);
  }
  return out;
}

std::string render_binding(const Query& q, const Database& d, const Witness& w) {
  std::string out = "(";
  for (std::size_t i = 0; i < w.binding.size(); ++i) {
    if (i) out += ", ";
    out += q.var_name(static_cast<int>(i)) + "=" + d.constant(w.binding[i]);
  }
  return out + ")";
}

std::size_t distinct_tuple_count(const WitnessSet& w) {
  std::unordered_set<int> seen;
  for (const auto& x : w)
    for (int t : x.tuples) seen.insert(t);
  return seen.size();
}

// Searches the tuple co-occurrence graph for an induced path t-r-s-u.
std::optional<P4Pattern> detect_p4(const WitnessSet& w) {
  std::map<int, int> index;
  for (const auto& x : w)
    for (int t : x.tuples) index.emplace(t, 0);
  std::vector<int> tuple_of;
  for (auto& [t, i] : index) {
    i = static_cast<int>(tuple_of.size());
    tuple_of.push_back(t);
  }
  const std::size_t n = tuple_of.size();
  std::vector<boost::dynamic_bitset<>> adj(n, boost::dynamic_bitset<>(n));
  // Some witness holding each adjacent pair.
  std::map<std::pair<int, int>, std::size_t> holder;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto& ts = w[k].tuples;
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = 0; j < ts.size(); ++j) {
        int a = index[ts[i]], b = index[ts[j]];
        if (a == b) continue;
        adj[a].set(b);
        holder.emplace(std::pair{a, b}, k);
      }
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (auto s = adj[r].find_first(); s != boost::dynamic_bitset<>::npos; s = adj[r].find_next(s)) {
      auto left = adj[r] - adj[s];
      left.reset(s);
      auto right = adj[s] - adj[r];
      right.reset(r);
      if (left.none() || right.none()) continue;
      for (auto t = left.find_first(); t != boost::dynamic_bitset<>::npos; t = left.find_next(t)) {
        auto far = right - adj[t];
        far.reset(t);
        auto u = far.find_first();
        if (u == boost::dynamic_bitset<>::npos) continue;
        int ri = static_cast<int>(r), si = static_cast<int>(s);
        return P4Pattern{holder.at({static_cast<int>(t), ri}), holder.at({ri, si}),
                         holder.at({si, static_cast<int>(u)}), tuple_of[r], tuple_of[s]};
      }
    }
  }
  return std::nullopt;
}

}  // namespace provfact
