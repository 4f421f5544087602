#include "provfact/fixtures.hpp"

#include "provfact/error.hpp"

namespace provfact {

const std::vector<NamedQuery>& named_queries() {
  static const std::vector<NamedQuery> queries{
      {"q2star", "Q2star :- R(x), S(x,y), T(y)"},
      {"q3star", "Q3star :- R(x), S(y), T(z), W(x,y,z)"},
      {"2chain", "Q2chain :- R(x,y), S(y,z)"},
      {"3chain", "Q3chain :- R(x,y), S(y,z), T(z,u)"},
      {"triangle", "Qtriangle :- R(x,y), S(y,z), T(z,x)"},
      {"triangle-unary", "QtriangleU :- U(x), R(x,y), S(y,z), T(z,x)"},
      {"2chain-we", "Q2chainWE :- A(x), R(x,y), S(y,z), B(z)"},
      {"6cycle-we",
       "Q6cycleWE :- A(x), R(x,y), B(y), S(y,z), C(z), T(z,u), D(u), U(u,v), E(v), V(v,w), F(w), W(w,x)"},
  };
  return queries;
}

Query named_query(std::string_view name) {
  for (const auto& q : named_queries())
    if (q.name == name) return parse_query(q.text);
  std::string known;
  for (const auto& q : named_queries()) known += (known.empty() ? "" : ", ") + q.name;
  throw Error("unknown query `" + std::string(name) + "` (known: " + known + ")");
}

Database two_star_database(bool with_s13) {
  std::string text = "[R]\n1\n2\n3\n[S]\n1,1\n1,2\n2,3\n3,3\n";
  if (with_s13) text += "1,3\n";
  text += "[T]\n1\n2\n3\n";
  return parse_database(text);
}

Database three_chain_database() { return parse_database("[R]\n1,1\n[S]\n1,1\n[T]\n1,1\n1,2\n"); }

Database triangle_database() { return parse_database("[R]\n0,0\n0,1\n[S]\n0,0\n1,0\n[T]\n0,0\n"); }

Database leakage_database() {
  // (x, y, z) = (0,0,0), (0,1,0), (1,1,0), (1,1,1)
  return parse_database("[R]\n0,0\n0,1\n1,1\n[S]\n0,0\n1,0\n1,1\n[T]\n0,0\n0,1\n1,1\n");
}

}  // namespace provfact
