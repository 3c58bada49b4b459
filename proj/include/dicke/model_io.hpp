#pragma once

#include <string>

#include "dicke/model.hpp"
#include "json.hpp"

namespace dicke {

// Model document schema (all energies in the same units):
//
//   {
//     "omega":   1.0,              photon frequency, > 0        (default 1)
//     "n_atoms": 1,                atom count, >= 1             (default 1)
//     "kappa":   0.0,              diamagnetic strength, >= 0   (default 0)
//     "ladder":  false,            if true, require d == 3 and lambda_02 == 0
//     "atom": {
//       "energies":  [0, 1, 2],    ascending, first entry 0
//       "couplings": [[0, a, 0], [a, 0, b], [0, b, 0]]
//                                  dense row-major, nested rows or a flat
//                                  list of d*d numbers
//     }
//   }
//
// A missing "atom" defaults to a two-level atom with energies (0, 1) and
// lambda_01 = 0.5. Unknown keys are rejected; every error names the dotted
// field path, e.g. "model.atom.couplings[1][0]".
DickeModel model_from_json(const nlohmann::json& doc, const std::string& path = "model");

nlohmann::json model_to_json(const DickeModel& model);

}  // namespace dicke
