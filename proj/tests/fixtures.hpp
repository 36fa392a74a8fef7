#pragma once

#include <json.hpp>

#include "frobwdvv/frobenius.hpp"

namespace frobwdvv::fixtures {

/// S_2(A_2): F = (w2)^2 w1 / 2 + (4/5) sqrt(2/3) (w1)^{5/2}, unity d/dw2.
inline FrobeniusSpec s2OfA2() {
    return parseSpec(nlohmann::json::parse(R"({
      "name": "s2_a2",
      "variables": ["w1", "w2"],
      "unity_index": 2,
      "potential": {"terms": [
        {"coeff": "1/2", "powers": {"w2": 2, "w1": 1}},
        {"coeff": "4/15", "radical": 6, "powers": {"w1": "5/2"}}
      ]},
      "euler": {"linear": ["4/3", "1"]},
      "charge": "-1/3",
      "mu": ["-1/6", "1/6"]
    })"));
}

/// One-dimensional F = v^3 / 6.
inline FrobeniusSpec trivial1() {
    return parseSpec(nlohmann::json::parse(R"({
      "name": "trivial",
      "variables": ["v"],
      "unity_index": 1,
      "potential": {"terms": [{"coeff": "1/6", "powers": {"v": 3}}]},
      "euler": {"linear": ["1"]},
      "charge": "0",
      "mu": ["0"]
    })"));
}

}  // namespace frobwdvv::fixtures
