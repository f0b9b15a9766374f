#pragma once

// Line-oriented text formats for knowledge bases with actions, ABox
// fragments, queries and paths.
//
//   # comment
//   [tbox]
//   role P, S                 optional; marks bare names as roles
//   Technician <= Employee
//   Employee <= not Product
//   exists P- <= A
//   P <= not S-
//   funct P
//   [abox]
//   Technician(t1)
//   P(t1, "Big Box")
//   [action] create
//   guard: Employee(x), P(x, _y)
//   new: y
//   add: Product(y)
//   del:

#include "dkb/actions.hpp"
#include "dkb/diagnostic.hpp"
#include "dkb/kb.hpp"
#include "dkb/query.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dkb {

// All three throw ParseError with every syntax and semantic error found.
DkbDocument parse_dkb(std::string_view text);

// A bare ABox fragment; the `[abox]` header is optional.
ABox parse_abox(std::string_view text);

/// Query text: atoms joined by `&`, disjuncts by `|`, `_x` existential,
/// `==` / `!=` comparisons, `true` / `false`. A term is a constant when it is
/// quoted or names one of `individuals`; otherwise it is a variable.
UnionQuery parse_query(std::string_view text, const std::set<Individual> &individuals = {});

struct PathLabel {
    std::string action; // base name, or "name[k]" for a specific rewritten variant
    Binding binding;

    friend bool operator==(const PathLabel &, const PathLabel &) = default;
};

/// One `step: <action> [with var=ind, ...]` per line.
std::vector<PathLabel> parse_path(std::string_view text);

std::string serialize_dkb(const DkbDocument &doc);
std::string serialize_abox(const ABox &abox);

} // namespace dkb
