#pragma once

#include "dkb/parser.hpp"
#include "dkb/query.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

namespace dkb::test {

inline std::string sample_path(const std::string &name) {
    return std::string(DKB_SAMPLES_DIR) + "/" + name;
}

inline std::string read_sample(const std::string &name) {
    std::ifstream in(sample_path(name));
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline DkbDocument sample_doc(const std::string &name) {
    return parse_dkb(read_sample(name));
}

inline ABox facts(const std::string &text) {
    return parse_abox(text);
}

// A single CQ; constants must be quoted or listed in `individuals`.
inline ConjunctiveQuery cq(const std::string &text, const std::set<Individual> &individuals = {}) {
    const UnionQuery u = parse_query(text, individuals);
    REQUIRE(u.disjuncts.size() == 1);
    return u.disjuncts.front();
}

inline TBox tbox_of(const std::string &axioms) {
    return parse_dkb("[tbox]\n" + axioms + "\n[abox]\n").kb.tbox;
}

} // namespace dkb::test
