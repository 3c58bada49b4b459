#include "dicke/model_io.hpp"

#include <cmath>

#include "dicke/errors.hpp"
#include "json_reader.hpp"

namespace dicke {

using detail::ObjectReader;
using nlohmann::json;

namespace {

std::string indexed(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

AtomSpec atom_from_json(const json& doc, const std::string& path) {
    ObjectReader r(doc, path);
    const auto& energies_doc = r.raw("energies");
    const std::string epath = r.field("energies");
    if (!energies_doc.is_array()) throw ConfigError(epath + ": expected an array");
    std::vector<double> energies;
    for (std::size_t i = 0; i < energies_doc.size(); ++i)
        energies.push_back(ObjectReader::as_number(energies_doc[i], indexed(epath, i)));
    const auto d = energies.size();
    if (d < 2) throw ConfigError(epath + ": need at least 2 levels");
    if (energies[0] != 0.0) throw ConfigError(indexed(epath, 0) + ": must be 0");
    for (std::size_t i = 1; i < d; ++i)
        if (energies[i] < energies[i - 1])
            throw ConfigError(indexed(epath, i) + ": energies must be sorted ascending");

    const auto& c_doc = r.raw("couplings");
    const std::string cpath = r.field("couplings");
    if (!c_doc.is_array()) throw ConfigError(cpath + ": expected an array");
    Eigen::MatrixXd c(d, d);
    const bool nested = !c_doc.empty() && c_doc[0].is_array();
    if (nested) {
        if (c_doc.size() != d) throw ConfigError(cpath + ": expected " + std::to_string(d) + " rows");
        for (std::size_t i = 0; i < d; ++i) {
            const auto& row = c_doc[i];
            if (!row.is_array() || row.size() != d)
                throw ConfigError(indexed(cpath, i) + ": expected " + std::to_string(d) + " entries");
            for (std::size_t k = 0; k < d; ++k)
                c(i, k) = ObjectReader::as_number(row[k], indexed(indexed(cpath, i), k));
        }
    } else {
        if (c_doc.size() != d * d)
            throw ConfigError(cpath + ": expected " + std::to_string(d * d) + " row-major entries");
        for (std::size_t i = 0; i < d * d; ++i)
            c(i / d, i % d) = ObjectReader::as_number(c_doc[i], indexed(cpath, i));
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (c(i, i) != 0.0)
            throw ConfigError(indexed(indexed(cpath, i), i) + ": diagonal coupling must be 0");
        for (std::size_t k = 0; k < i; ++k)
            if (c(i, k) != c(k, i))
                throw ConfigError(indexed(indexed(cpath, i), k) +
                                  ": coupling matrix must be symmetric");
    }
    r.finish();
    return AtomSpec(std::move(energies), std::move(c));
}

}  // namespace

DickeModel model_from_json(const json& doc, const std::string& path) {
    ObjectReader r(doc, path);
    const double omega = r.number("omega", 1.0);
    if (!(omega > 0.0)) throw ConfigError(r.field("omega") + ": must be > 0");
    const long long n_atoms = r.integer("n_atoms", 1);
    if (n_atoms < 1 || n_atoms > 1'000'000'000)
        throw ConfigError(r.field("n_atoms") + ": must be >= 1");
    const double kappa = r.number("kappa", 0.0);
    if (!(kappa >= 0.0)) throw ConfigError(r.field("kappa") + ": must be >= 0");
    const bool ladder = r.boolean("ladder", false);

    AtomSpec atom = r.has("atom") ? atom_from_json(r.raw("atom"), r.field("atom"))
                                  : AtomSpec::two_level(1.0, 0.5);
    if (ladder) {
        if (atom.levels() != 3)
            throw ConfigError(r.field("ladder") + ": ladder configuration needs exactly 3 levels");
        if (atom.coupling(0, 2) != 0.0)
            throw ConfigError(r.field("atom.couplings") +
                              ": ladder configuration forbids a 0-2 coupling (lambda_02 must be 0)");
    }
    r.finish();
    return DickeModel(omega, static_cast<int>(n_atoms), std::move(atom), kappa);
}

json model_to_json(const DickeModel& model) {
    const AtomSpec& atom = model.atom();
    json rows = json::array();
    for (int j = 0; j < atom.levels(); ++j) {
        json row = json::array();
        for (int k = 0; k < atom.levels(); ++k) row.push_back(atom.coupling(j, k));
        rows.push_back(std::move(row));
    }
    json out;
    out["omega"] = model.omega();
    out["n_atoms"] = model.n_atoms();
    out["kappa"] = model.kappa();
    out["atom"] = {{"energies", atom.energies()}, {"couplings", std::move(rows)}};
    return out;
}

}  // namespace dicke
