// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cli/handles.hpp"

namespace mrcli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!keys.count(item.key())) {
            throw ConfigError(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
        }
    }
}

const json& require_object(const json& doc, const std::string& field) {
    if (!doc.contains(field)) throw ConfigError(field, "missing");
    const json& v = doc.at(field);
    if (!v.is_object()) throw ConfigError(field, "expected an object");
    return v;
}

double get_number(const json& obj, const std::string& where, const char* key, std::optional<double> fallback = {}) {
    const std::string field = where.empty() ? std::string(key) : where + "." + key;
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(field, "missing");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
    return x;
}

double get_positive(const json& obj, const std::string& where, const char* key, std::optional<double> fallback = {}) {
    const double x = get_number(obj, where, key, fallback);
    if (!(x > 0.0)) throw ConfigError(where + "." + key, "must be positive");
    return x;
}

std::uint64_t get_unsigned(const json& v, const std::string& field) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ConfigError(field, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& v, const std::string& field) {
    if (!v.is_string()) throw ConfigError(field, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_vector(const json& obj, const std::string& where, const char* key) {
    const std::string field = where.empty() ? std::string(key) : where + "." + key;
    if (!obj.contains(key)) throw ConfigError(field, "missing");
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(field, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(field + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
        if (!std::isfinite(out.back())) throw ConfigError(field + "[" + std::to_string(i) + "]", "must be finite");
    }
    return out;
}

mrs_parameterization parse_parameterization(const std::string& s, const std::string& field) {
    if (s == "noise") return MRS_PARAM_NOISE;
    if (s == "data") return MRS_PARAM_DATA;
    if (s == "velocity") return MRS_PARAM_VELOCITY;
    throw ConfigError(field, "expected one of noise, data, velocity (got '" + s + "')");
}

mrs_solver_family parse_family(const std::string& s, const std::string& field) {
    if (s == "mr_sde") return MRS_SOLVER_MR_SDE;
    if (s == "mr_ode") return MRS_SOLVER_MR_ODE;
    if (s == "posterior") return MRS_SOLVER_POSTERIOR;
    if (s == "euler_maruyama") return MRS_SOLVER_EULER_MARUYAMA;
    throw ConfigError(field, "expected one of mr_sde, mr_ode, posterior, euler_maruyama (got '" + s + "')");
}

bool is_mr(mrs_solver_family f) { return f == MRS_SOLVER_MR_SDE || f == MRS_SOLVER_MR_ODE; }

ScheduleConfig parse_schedule(const json& doc) {
    const json& obj = require_object(doc, "schedule");
    ScheduleConfig out;
    const std::string family = obj.contains("family") ? get_string(obj.at("family"), "schedule.family") : "constant";
    if (family == "constant") {
        reject_unknown(obj, "schedule", {"family", "theta", "sigma_inf", "T"});
        out.family = MRS_SCHEDULE_CONSTANT;
        out.theta_a = get_positive(obj, "schedule", "theta");
    } else if (family == "linear") {
        reject_unknown(obj, "schedule", {"family", "theta_start", "theta_end", "sigma_inf", "T"});
        out.family = MRS_SCHEDULE_LINEAR;
        out.theta_a = get_positive(obj, "schedule", "theta_start");
        out.theta_b = get_positive(obj, "schedule", "theta_end");
    } else if (family == "cosine") {
        reject_unknown(obj, "schedule", {"family", "theta_min", "theta_max", "sigma_inf", "T"});
        out.family = MRS_SCHEDULE_COSINE;
        out.theta_a = get_positive(obj, "schedule", "theta_min");
        out.theta_b = get_positive(obj, "schedule", "theta_max");
    } else {
        throw ConfigError("schedule.family", "expected one of constant, linear, cosine (got '" + family + "')");
    }
    out.sigma_inf = get_positive(obj, "schedule", "sigma_inf", 1.0);
    out.t_max = get_positive(obj, "schedule", "T", 1.0);
    return out;
}

OracleConfig parse_oracle(const json& doc) {
    const json& obj = require_object(doc, "oracle");
    OracleConfig out;
    if (!obj.contains("kind")) throw ConfigError("oracle.kind", "missing");
    const std::string kind = get_string(obj.at("kind"), "oracle.kind");
    if (kind == "dirac") {
        reject_unknown(obj, "oracle", {"kind", "x0", "predictor"});
        out.kind = MRS_ORACLE_DIRAC;
        out.params = get_vector(obj, "oracle", "x0");
    } else if (kind == "gaussian") {
        reject_unknown(obj, "oracle", {"kind", "m0", "s0", "predictor"});
        out.kind = MRS_ORACLE_GAUSSIAN;
        out.params = get_vector(obj, "oracle", "m0");
        out.scale = get_number(obj, "oracle", "s0");
        if (out.scale < 0.0) throw ConfigError("oracle.s0", "must be non-negative");
    } else if (kind == "constant_noise") {
        reject_unknown(obj, "oracle", {"kind", "c", "predictor"});
        out.kind = MRS_ORACLE_CONSTANT_NOISE;
        out.params = get_vector(obj, "oracle", "c");
    } else {
        throw ConfigError("oracle.kind", "expected one of dirac, gaussian, constant_noise (got '" + kind + "')");
    }
    if (obj.contains("predictor"))
        out.output = parse_parameterization(get_string(obj.at("predictor"), "oracle.predictor"), "oracle.predictor");
    return out;
}

mrs_sampler_spec parse_sampler(const json& doc) {
    mrs_sampler_spec spec;
    mrs_sampler_spec_init(&spec);
    if (!doc.contains("sampler")) return spec;
    const json& obj = require_object(doc, "sampler");
    reject_unknown(obj, "sampler",
                   {"family", "parameterization", "order", "nfe", "spacing", "t_end", "seed", "denoise_final"});
    if (obj.contains("family")) spec.family = parse_family(get_string(obj.at("family"), "sampler.family"), "sampler.family");
    if (obj.contains("parameterization"))
        spec.parameterization = parse_parameterization(get_string(obj.at("parameterization"), "sampler.parameterization"),
                                                       "sampler.parameterization");
    if (obj.contains("order")) {
        const auto order = get_unsigned(obj.at("order"), "sampler.order");
        if (order != 1 && order != 2) throw ConfigError("sampler.order", "must be 1 or 2");
        spec.order = static_cast<int>(order);
    }
    if (obj.contains("nfe")) {
        spec.nfe = get_unsigned(obj.at("nfe"), "sampler.nfe");
        if (spec.nfe == 0) throw ConfigError("sampler.nfe", "must be at least 1");
    }
    if (obj.contains("spacing")) {
        const std::string s = get_string(obj.at("spacing"), "sampler.spacing");
        if (s == "uniform_t") spec.spacing = MRS_SPACING_UNIFORM_T;
        else if (s == "uniform_lambda") spec.spacing = MRS_SPACING_UNIFORM_LAMBDA;
        else throw ConfigError("sampler.spacing", "expected uniform_t or uniform_lambda (got '" + s + "')");
    }
    if (obj.contains("t_end")) spec.t_end = get_positive(obj, "sampler", "t_end");
    if (obj.contains("seed")) spec.seed = get_unsigned(obj.at("seed"), "sampler.seed");
    if (obj.contains("denoise_final")) {
        if (!obj.at("denoise_final").is_boolean()) throw ConfigError("sampler.denoise_final", "expected a boolean");
        spec.denoise_final = obj.at("denoise_final").get<bool>() ? 1 : 0;
    }
    if (is_mr(spec.family) && spec.parameterization == MRS_PARAM_VELOCITY)
        throw ConfigError("sampler.parameterization", "MR solvers take noise or data");
    if (spec.order == 2 && !is_mr(spec.family)) throw ConfigError("sampler.order", "order 2 applies to MR solvers only");
    if (spec.order == 2 && spec.nfe < 2) throw ConfigError("sampler.nfe", "order 2 needs at least 2 steps");
    if (spec.denoise_final && !(is_mr(spec.family) && spec.parameterization == MRS_PARAM_DATA))
        throw ConfigError("sampler.denoise_final", "requires a data-parameterized MR solver");
    return spec;
}

}  // namespace

Method parse_method(const std::string& name) {
    if (name == "posterior") return {MRS_SOLVER_POSTERIOR, MRS_PARAM_NOISE, 1};
    if (name == "euler_maruyama") return {MRS_SOLVER_EULER_MARUYAMA, MRS_PARAM_NOISE, 1};
    // mr_<sde|ode>_<n|d>_<1|2>
    if (name.size() == 10 && name.compare(0, 3, "mr_") == 0 && name[6] == '_' && name[8] == '_') {
        Method m;
        const std::string kind = name.substr(3, 3);
        const char param = name[7];
        const char order = name[9];
        const bool kind_ok = kind == "sde" || kind == "ode";
        const bool param_ok = param == 'n' || param == 'd';
        const bool order_ok = order == '1' || order == '2';
        if (kind_ok && param_ok && order_ok) {
            m.family = kind == "sde" ? MRS_SOLVER_MR_SDE : MRS_SOLVER_MR_ODE;
            m.parameterization = param == 'n' ? MRS_PARAM_NOISE : MRS_PARAM_DATA;
            m.order = order - '0';
            return m;
        }
    }
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected mr_<sde|ode>_<n|d>_<1|2>, posterior or euler_maruyama)");
}

std::string method_name(const Method& m) {
    switch (m.family) {
        case MRS_SOLVER_POSTERIOR: return "posterior";
        case MRS_SOLVER_EULER_MARUYAMA: return "euler_maruyama";
        default: break;
    }
    std::string out = m.family == MRS_SOLVER_MR_SDE ? "mr_sde_" : "mr_ode_";
    out += m.parameterization == MRS_PARAM_NOISE ? 'n' : 'd';
    out += '_';
    out += static_cast<char>('0' + m.order);
    return out;
}

void apply_overrides(json& doc, const Overrides& overrides) {
    if (!doc.is_object()) throw ConfigError("<root>", "expected an object");
    if (overrides.seed) doc["sampler"]["seed"] = *overrides.seed;
    if (overrides.out) doc["outputs"]["dir"] = *overrides.out;
    if (overrides.workers) doc["workers"] = *overrides.workers;
    if (overrides.nfe) {
        doc["nfe_list"] = *overrides.nfe;
        if (overrides.nfe->size() == 1) doc["sampler"]["nfe"] = overrides.nfe->front();
    }
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("<root>", "expected an object");
    reject_unknown(doc, "", {"schedule", "oracle", "mu", "sampler", "chains", "workers", "nfe_list", "methods",
                             "parameterizations", "outputs"});
    ExperimentConfig cfg;
    cfg.schedule = parse_schedule(doc);
    cfg.oracle = parse_oracle(doc);

    if (doc.contains("mu")) {
        cfg.mu = get_vector(doc, "", "mu");
    } else {
        cfg.mu.assign(cfg.oracle.params.size(), 0.0);
    }
    if (cfg.mu.size() != cfg.oracle.params.size())
        throw ConfigError("mu", "length " + std::to_string(cfg.mu.size()) + " does not match the oracle dimension " +
                                    std::to_string(cfg.oracle.params.size()));

    cfg.sampler = parse_sampler(doc);
    if (cfg.sampler.t_end >= cfg.schedule.t_max) throw ConfigError("sampler.t_end", "must lie below schedule.T");

    if (doc.contains("chains")) {
        cfg.chains = get_unsigned(doc.at("chains"), "chains");
        if (cfg.chains == 0) throw ConfigError("chains", "must be at least 1");
    }
    if (doc.contains("workers")) {
        cfg.workers = get_unsigned(doc.at("workers"), "workers");
        if (cfg.workers == 0) throw ConfigError("workers", "must be at least 1");
    }
    if (doc.contains("nfe_list")) {
        const json& v = doc.at("nfe_list");
        if (!v.is_array() || v.empty()) throw ConfigError("nfe_list", "expected a non-empty array of integers");
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string field = "nfe_list[" + std::to_string(i) + "]";
            const auto n = get_unsigned(v[i], field);
            if (n == 0) throw ConfigError(field, "must be at least 1");
            if (!seen.insert(n).second) throw ConfigError(field, "duplicate value");
            cfg.nfe_list.push_back(n);
        }
    }
    if (doc.contains("methods")) {
        const json& v = doc.at("methods");
        if (!v.is_array() || v.empty()) throw ConfigError("methods", "expected a non-empty array of method names");
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string field = "methods[" + std::to_string(i) + "]";
            try {
                cfg.methods.push_back(parse_method(get_string(v[i], field)));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(field, e.what());
            }
        }
    }
    if (doc.contains("parameterizations")) {
        const json& v = doc.at("parameterizations");
        if (!v.is_array() || v.empty()) throw ConfigError("parameterizations", "expected a non-empty array");
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string field = "parameterizations[" + std::to_string(i) + "]";
            const auto p = parse_parameterization(get_string(v[i], field), field);
            if (p == MRS_PARAM_VELOCITY) throw ConfigError(field, "MR solvers take noise or data");
            cfg.parameterizations.push_back(p);
        }
    }
    if (doc.contains("outputs")) {
        const json& obj = require_object(doc, "outputs");
        reject_unknown(obj, "outputs", {"dir", "trajectories"});
        if (obj.contains("dir")) cfg.out_dir = get_string(obj.at("dir"), "outputs.dir");
        if (obj.contains("trajectories")) {
            if (!obj.at("trajectories").is_boolean()) throw ConfigError("outputs.trajectories", "expected a boolean");
            cfg.write_trajectories = obj.at("trajectories").get<bool>();
        }
    }
    return cfg;
}

json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace mrcli
