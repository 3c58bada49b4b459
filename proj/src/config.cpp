#include "dicke/config.hpp"

#include <cmath>
#include <map>
#include <set>

#include "dicke/errors.hpp"
#include "dicke/model_io.hpp"
#include "json_reader.hpp"

namespace dicke {

using detail::ObjectReader;
using nlohmann::json;

namespace {

const std::map<std::string, Command> command_names{
    {"meanfield-scan", Command::meanfield_scan}, {"critical", Command::critical},
    {"no-go", Command::no_go},                   {"ed-ground", Command::ed_ground},
    {"ed-nscan", Command::ed_nscan},             {"cpb-sweet-spot", Command::cpb_sweet_spot},
    {"trk-check", Command::trk_check}};

const std::map<Command, std::set<std::string>> sections{
    {Command::meanfield_scan, {"model", "axis", "scan", "tolerances"}},
    {Command::critical, {"model", "axis", "bracket", "tolerances"}},
    {Command::no_go, {"model", "axis", "no_go", "tolerances"}},
    {Command::ed_ground, {"model", "ed", "tolerances"}},
    {Command::ed_nscan, {"model", "ed", "tolerances"}},
    {Command::cpb_sweet_spot, {"cpb"}},
    {Command::trk_check, {"model"}}};

std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(ObjectReader::as_number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

LevelPair level_pair(const json& v, const std::string& path, int levels) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(path + ": expected [j, k]");
    const auto j = ObjectReader::as_integer(v[0], path + "[0]");
    const auto k = ObjectReader::as_integer(v[1], path + "[1]");
    if (j == k || j < 0 || k < 0 || j >= levels || k >= levels)
        throw ConfigError(path + ": levels must be distinct and within 0.." + std::to_string(levels - 1));
    return LevelPair(static_cast<int>(j), static_cast<int>(k));
}

CouplingAxis parse_axis(const json& doc, const std::string& path, const DickeModel& model) {
    ObjectReader r(doc, path);
    CouplingAxis axis;
    const int d = model.atom().levels();
    if (r.has("coupling")) axis.which = level_pair(r.raw("coupling"), r.field("coupling"), d);
    if (r.has("tied")) {
        const auto& tied = r.raw("tied");
        const std::string tpath = r.field("tied");
        if (!tied.is_array()) throw ConfigError(tpath + ": expected an array");
        for (std::size_t i = 0; i < tied.size(); ++i) {
            ObjectReader t(tied[i], tpath + "[" + std::to_string(i) + "]");
            TiedCoupling tc{level_pair(t.raw("coupling"), t.field("coupling"), d), t.number("ratio")};
            if (tc.pair == axis.which) throw ConfigError(t.field("coupling") + ": cannot tie the scanned coupling to itself");
            t.finish();
            axis.tied.push_back(tc);
        }
    }
    const std::string rule = r.string("kappa_rule", "fixed");
    if (rule == "fixed") {
        axis.kappa_rule = KappaRule::fixed;
    } else if (rule == "trk-ground") {
        if (!(model.atom().energies()[1] > 0.0))
            throw ConfigError(r.field("kappa_rule") + ": trk-ground needs eps_1 > 0 (degenerate ground transition)");
        axis.kappa_rule = KappaRule::trk_ground;
    } else {
        throw ConfigError(r.field("kappa_rule") + ": expected \"fixed\" or \"trk-ground\"");
    }
    r.finish();
    return axis;
}

std::vector<double> parse_scan(const json& doc, const std::string& path) {
    ObjectReader r(doc, path);
    std::vector<double> values;
    if (r.has("values")) {
        if (r.has("start") || r.has("stop") || r.has("points"))
            throw ConfigError(path + ": give either values or start/stop/points");
        values = number_list(r.raw("values"), r.field("values"));
    } else {
        const double start = r.number("start");
        const double stop = r.number("stop");
        const long long points = r.integer("points");
        if (points < 2) throw ConfigError(r.field("points") + ": need at least 2 points");
        if (!(stop > start)) throw ConfigError(r.field("stop") + ": must exceed start");
        for (long long i = 0; i < points; ++i)
            values.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    r.finish();
    if (values.size() < 2) throw ConfigError(path + ".values: need at least 2 coupling values");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1])) throw ConfigError(path + ".values: must be strictly ascending");
    return values;
}

void parse_tolerances(const json& doc, const std::string& path, RunConfig& cfg) {
    ObjectReader r(doc, path);
    auto& mf = cfg.critical.minimize;
    mf.x_tol = r.number("x_tol", mf.x_tol);
    if (!(mf.x_tol > 0.0)) throw ConfigError(r.field("x_tol") + ": must be > 0");
    const long long grid = r.integer("grid_points", mf.grid_points);
    if (grid < 400 || grid > 10'000'000) throw ConfigError(r.field("grid_points") + ": must be >= 400");
    mf.grid_points = static_cast<int>(grid);
    cfg.critical.jump_threshold = r.number("jump_threshold", cfg.critical.jump_threshold);
    if (!(cfg.critical.jump_threshold > 0.0)) throw ConfigError(r.field("jump_threshold") + ": must be > 0");
    cfg.critical.relative_width = r.number("bisection_width", cfg.critical.relative_width);
    if (!(cfg.critical.relative_width > 0.0 && cfg.critical.relative_width < 1.0))
        throw ConfigError(r.field("bisection_width") + ": must lie in (0, 1)");
    cfg.critical.relative_delta = r.number("probe_delta", cfg.critical.relative_delta);
    if (!(cfg.critical.relative_delta > 0.0 && cfg.critical.relative_delta < 0.5))
        throw ConfigError(r.field("probe_delta") + ": must lie in (0, 0.5)");
    cfg.ed.lanczos.tolerance = r.number("lanczos_tol", cfg.ed.lanczos.tolerance);
    if (!(cfg.ed.lanczos.tolerance > 0.0)) throw ConfigError(r.field("lanczos_tol") + ": must be > 0");
    r.finish();
}

void parse_ed(const json& doc, const std::string& path, RunConfig& cfg) {
    ObjectReader r(doc, path);
    if (cfg.command == Command::ed_nscan) {
        const auto& list = r.raw("n_atoms");
        const std::string lpath = r.field("n_atoms");
        if (!list.is_array() || list.empty()) throw ConfigError(lpath + ": expected a non-empty array of atom counts");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto n = ObjectReader::as_integer(list[i], lpath + "[" + std::to_string(i) + "]");
            if (n < 1 || n > 1'000'000) throw ConfigError(lpath + "[" + std::to_string(i) + "]: must be >= 1");
            cfg.ed_atoms.push_back(static_cast<int>(n));
        }
    }
    if (r.has("n_max")) {
        const auto& v = r.raw("n_max");
        if (cfg.command == Command::ed_nscan && !(v.is_string() && v.get<std::string>() == "auto"))
            throw ConfigError(r.field("n_max") + ": ed-nscan always converges the cutoff; use \"auto\"");
        if (v.is_string()) {
            if (v.get<std::string>() != "auto") throw ConfigError(r.field("n_max") + ": expected an integer or \"auto\"");
        } else {
            const auto n = ObjectReader::as_integer(v, r.field("n_max"));
            if (n < 0 || n > 100'000'000) throw ConfigError(r.field("n_max") + ": must be >= 0");
            cfg.ed_n_max = static_cast<int>(n);
        }
    }
    cfg.cutoff.tol_e = r.number("tol_e", cfg.cutoff.tol_e);
    if (!(cfg.cutoff.tol_e > 0.0)) throw ConfigError(r.field("tol_e") + ": must be > 0");
    cfg.cutoff.growth = r.number("growth", cfg.cutoff.growth);
    if (!(cfg.cutoff.growth > 1.0)) throw ConfigError(r.field("growth") + ": must be > 1");
    const long long limit = r.integer("dim_limit", static_cast<long long>(cfg.ed.dim_limit));
    if (limit < 1) throw ConfigError(r.field("dim_limit") + ": must be >= 1");
    cfg.ed.dim_limit = static_cast<std::size_t>(limit);
    cfg.dump_state = r.boolean("dump_state", false);
    r.finish();
}

CpbSpec parse_cpb(const json& doc, const std::string& path, RunConfig& cfg) {
    ObjectReader r(doc, path);
    const double ec = r.number("ec", 1.0);
    if (!(ec > 0.0)) throw ConfigError(r.field("ec") + ": must be > 0");
    const double ej = r.number("ej", 0.05);
    if (!(ej >= 0.0)) throw ConfigError(r.field("ej") + ": must be >= 0");
    const double ng = r.number("ng", 0.5);
    if (r.has("sweep")) {
        ObjectReader s(r.raw("sweep"), r.field("sweep"));
        cfg.cpb_ej_values = s.has("ej") ? number_list(s.raw("ej"), s.field("ej")) : std::vector<double>{ej};
        cfg.cpb_ng_values = s.has("ng") ? number_list(s.raw("ng"), s.field("ng")) : std::vector<double>{ng};
        for (std::size_t i = 0; i < cfg.cpb_ej_values.size(); ++i)
            if (!(cfg.cpb_ej_values[i] >= 0.0))
                throw ConfigError(s.field("ej") + "[" + std::to_string(i) + "]: must be >= 0");
        s.finish();
    }
    double max_ng = std::abs(ng);
    for (double v : cfg.cpb_ng_values) max_ng = std::max(max_ng, std::abs(v));
    const long long n_cut = r.integer("n_cut", CpbSpec::minimum_cutoff(max_ng) + 5);
    if (n_cut < CpbSpec::minimum_cutoff(max_ng) || n_cut > 100'000)
        throw ConfigError(r.field("n_cut") + ": must be >= 5 + ceil(|ng|) = " +
                          std::to_string(CpbSpec::minimum_cutoff(max_ng)) + " for every gate charge used");
    r.finish();
    return CpbSpec(ec, ej, ng, static_cast<int>(n_cut));
}

}  // namespace

std::string to_string(Command command) {
    for (const auto& [name, c] : command_names)
        if (c == command) return name;
    return "unknown";
}

RunConfig parse_config(const json& doc) {
    ObjectReader r(doc, "");
    RunConfig cfg;
    const std::string name = r.string("command");
    const auto it = command_names.find(name);
    if (it == command_names.end()) throw ConfigError("command: unknown command \"" + name + "\"");
    cfg.command = it->second;

    if (r.has("seed")) {
        const auto& v = r.raw("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ConfigError("seed: expected a non-negative integer");
        cfg.seed = v.get<std::uint64_t>();
        cfg.seed_defaulted = false;
    }
    cfg.output = r.string("output", cfg.output);
    if (cfg.output.empty()) throw ConfigError("output: must not be empty");

    const auto& allowed = sections.at(cfg.command);
    for (const auto& [key, value] : doc.items()) {
        if (key == "command" || key == "seed" || key == "output") continue;
        if (!allowed.count(key)) {
            bool known = false;
            for (const auto& [c, keys] : sections) known = known || keys.count(key);
            throw ConfigError(key + (known ? ": not used by command \"" + name + "\"" : std::string(": unknown key")));
        }
    }

    if (r.has("tolerances")) parse_tolerances(r.raw("tolerances"), "tolerances", cfg);
    cfg.ed.lanczos.seed = cfg.seed;

    if (cfg.command == Command::cpb_sweet_spot) {
        cfg.cpb = parse_cpb(r.has("cpb") ? r.raw("cpb") : json::object(), "cpb", cfg);
        r.finish();
        return cfg;
    }

    cfg.model = model_from_json(r.has("model") ? r.raw("model") : json::object(), "model");
    const DickeModel& model = *cfg.model;

    switch (cfg.command) {
        case Command::meanfield_scan:
            cfg.axis = parse_axis(r.has("axis") ? r.raw("axis") : json::object(), "axis", model);
            cfg.scan_values = parse_scan(r.raw("scan"), "scan");
            break;
        case Command::critical: {
            cfg.axis = parse_axis(r.has("axis") ? r.raw("axis") : json::object(), "axis", model);
            cfg.bracket_lo = 0.0;
            cfg.bracket_hi = 4.0 * std::sqrt(model.omega() * model.atom().energies().back());
            if (r.has("bracket")) {
                const auto b = number_list(r.raw("bracket"), "bracket");
                if (b.size() != 2) throw ConfigError("bracket: expected [lo, hi]");
                if (!(b[1] > b[0])) throw ConfigError("bracket[1]: must exceed bracket[0]");
                cfg.bracket_lo = b[0];
                cfg.bracket_hi = b[1];
            }
            if (!(cfg.bracket_hi > cfg.bracket_lo)) throw ConfigError("bracket: default bracket is empty; give one explicitly");
            break;
        }
        case Command::no_go: {
            cfg.axis = parse_axis(r.has("axis") ? r.raw("axis") : json::object(), "axis", model);
            ObjectReader n(r.has("no_go") ? r.raw("no_go") : json::object(), "no_go");
            cfg.lambda_max = n.number("lambda_max", 10.0 * std::sqrt(model.omega() * model.atom().energies().back()));
            if (!(cfg.lambda_max > 0.0)) throw ConfigError("no_go.lambda_max: must be > 0");
            const long long points = n.integer("points", 201);
            if (points < 100 || points > 10'000'000) throw ConfigError("no_go.points: must be >= 100");
            cfg.n_points = static_cast<int>(points);
            n.finish();
            break;
        }
        case Command::ed_ground:
            if (r.has("ed")) parse_ed(r.raw("ed"), "ed", cfg);
            break;
        case Command::ed_nscan:
            parse_ed(r.raw("ed"), "ed", cfg);
            break;
        case Command::trk_check:
            if (!(model.atom().energies()[1] > 0.0))
                throw ConfigError("model.atom.energies[1]: degenerate ground transition (eps_1 must be > 0)");
            break;
        case Command::cpb_sweet_spot:
            break;
    }
    // Sections were validated above; mark them consumed.
    for (const auto& key : allowed)
        if (r.has(key)) r.raw(key);
    r.finish();
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json out;
    out["command"] = to_string(cfg.command);
    out["seed"] = cfg.seed;
    out["seed_defaulted"] = cfg.seed_defaulted;
    out["output"] = cfg.output;
    if (cfg.cpb) {
        json c{{"ec", cfg.cpb->ec()}, {"ej", cfg.cpb->ej()}, {"ng", cfg.cpb->ng()}, {"n_cut", cfg.cpb->n_cut()}};
        if (!cfg.cpb_ej_values.empty()) c["sweep"] = {{"ej", cfg.cpb_ej_values}, {"ng", cfg.cpb_ng_values}};
        out["cpb"] = std::move(c);
        return out;
    }
    out["model"] = model_to_json(*cfg.model);
    const auto& mf = cfg.critical.minimize;
    json tol{{"x_tol", mf.x_tol}, {"grid_points", mf.grid_points}};
    const auto axis_json = [&] {
        json tied = json::array();
        for (const auto& t : cfg.axis.tied) tied.push_back({{"coupling", {t.pair.lower, t.pair.upper}}, {"ratio", t.ratio}});
        return json{{"coupling", {cfg.axis.which.lower, cfg.axis.which.upper}},
                    {"tied", std::move(tied)},
                    {"kappa_rule", cfg.axis.kappa_rule == KappaRule::fixed ? "fixed" : "trk-ground"}};
    };
    const auto ed_json = [&] {
        json e{{"tol_e", cfg.cutoff.tol_e}, {"growth", cfg.cutoff.growth},
               {"dim_limit", cfg.ed.dim_limit}, {"dump_state", cfg.dump_state}};
        if (cfg.command == Command::ed_nscan) e["n_atoms"] = cfg.ed_atoms;
        if (cfg.ed_n_max) e["n_max"] = *cfg.ed_n_max;
        else e["n_max"] = "auto";
        return e;
    };
    switch (cfg.command) {
        case Command::meanfield_scan:
            out["axis"] = axis_json();
            out["scan"] = {{"values", cfg.scan_values}};
            break;
        case Command::critical:
            out["axis"] = axis_json();
            out["bracket"] = {cfg.bracket_lo, cfg.bracket_hi};
            tol["jump_threshold"] = cfg.critical.jump_threshold;
            tol["bisection_width"] = cfg.critical.relative_width;
            tol["probe_delta"] = cfg.critical.relative_delta;
            break;
        case Command::no_go:
            out["axis"] = axis_json();
            out["no_go"] = {{"lambda_max", cfg.lambda_max}, {"points", cfg.n_points}};
            break;
        case Command::ed_ground:
        case Command::ed_nscan:
            out["ed"] = ed_json();
            tol = {{"lanczos_tol", cfg.ed.lanczos.tolerance}, {"x_tol", mf.x_tol}, {"grid_points", mf.grid_points}};
            break;
        default:
            break;
    }
    if (cfg.command != Command::trk_check) out["tolerances"] = std::move(tol);
    return out;
}

}  // namespace dicke
