#include "gammadyn/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "gammadyn/certify.hpp"
#include "gammadyn/serialize.hpp"

namespace gammadyn::cli {

namespace {

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output_path.empty())
        std::cout << text << "\n";
    else
        write_text_file(cfg.output_path, text + "\n");
}

int map_error(const Error& e, bool constructing) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
        case ErrorCode::Coverable:
            return constructing ? kExitCoverable : kExitInvalidInput;
        case ErrorCode::CoordinateExhausted:
        case ErrorCode::MBudgetExceeded:
        case ErrorCode::PhaseBudgetExceeded:
        case ErrorCode::RejectionBudgetExceeded:
        case ErrorCode::ExtractionFailed:
        case ErrorCode::NotPairwiseIndependent:
        case ErrorCode::NoTrend:
        case ErrorCode::TargetUnreachable:
            return constructing ? kExitInfeasible : kExitViolation;
        case ErrorCode::BoundViolated:
        case ErrorCode::ReportFailure:
        case ErrorCode::NotASymmetry:
            return kExitViolation;
        default:
            return kExitInvalidInput;
    }
}

json config_echo(const RunConfig& cfg) {
    json j = encode(cfg.build);
    j["input"] = cfg.input_path;
    return j;
}

} // namespace

void apply_config_file(RunConfig& cfg) {
    if (cfg.config_path.empty()) return;
    const json j = read_json_file(cfg.config_path);
    cfg.build = decode_build_options(j);
    cfg.bf_theta = j.value("theta", cfg.bf_theta);
    cfg.bf_eps = j.value("eps", cfg.bf_eps);
    cfg.bf_lambda = j.value("lambda", cfg.bf_lambda);
    cfg.bf_k0 = j.value("k0", cfg.bf_k0);
    if (j.contains("gamma_sample")) {
        const auto& g = j["gamma_sample"];
        cfg.bf_gamma_count = g.value("count", cfg.bf_gamma_count);
        cfg.bf_gamma_min = g.value("min", cfg.bf_gamma_min);
        cfg.bf_gamma_max = g.value("max", cfg.bf_gamma_max);
    }
    if (j.contains("targets"))
        cfg.bf_targets = j["targets"].get<std::vector<std::vector<double>>>();
}

int run_classify(const RunConfig& cfg) {
    try {
        const ScalarSet set = decode_scalar_set(read_json_file(cfg.input_path));
        SetOptions opts = cfg.build.set;
        opts.seed = cfg.build.seed;
        const CoverReport report = classify_cover(set, opts.cover_tol, opts);
        json out = encode(report);
        out["config"] = config_echo(cfg);
        emit(cfg, out.dump(2));
        return report.coverable ? kExitOk : kExitNotCoverable;
    } catch (const Error& e) {
        return map_error(e, false);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
}

int run_construct(const RunConfig& cfg) {
    try {
        const ScalarSet set = decode_scalar_set(read_json_file(cfg.input_path));
        const CounterexampleBundle bundle = build_counterexample(set, cfg.build.K, cfg.build);
        emit(cfg, encode(bundle).dump(2));
        return kExitOk;
    } catch (const Error& e) {
        return map_error(e, true);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
}

int run_verify(const RunConfig& cfg) {
    try {
        const CounterexampleBundle bundle = decode_bundle(read_json_file(cfg.input_path));
        const ConditionReport conditions = verify_conditions(bundle);
        const OrbitErrorReport orbit = measure_orbit_errors(bundle);
        json out{{"conditions", encode(conditions)},
                 {"orbit", encode(orbit)},
                 {"pass", conditions.all_pass && orbit.all_pass},
                 {"config", config_echo(cfg)}};
        emit(cfg, out.dump(2));
        return conditions.all_pass && orbit.all_pass ? kExitOk : kExitViolation;
    } catch (const Error& e) {
        return map_error(e, false);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
}

int run_orbit(const RunConfig& cfg) {
    try {
        const CounterexampleBundle bundle = decode_bundle(read_json_file(cfg.input_path));
        const OrbitErrorReport orbit = measure_orbit_errors(bundle);
        std::ostringstream csv;
        csv << "k,m_k,e_k,b_k,margin";
        csv.precision(17);
        for (const auto& row : orbit.rows)
            csv << "\n"
                << row.k << "," << row.m << "," << row.e << "," << row.b << "," << row.margin;
        emit(cfg, csv.str());
        return orbit.all_pass ? kExitOk : kExitViolation;
    } catch (const Error& e) {
        return map_error(e, false);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
}

int run_bf_demo(const RunConfig& cfg) {
    try {
        BfDemoConfig demo;
        demo.theta = cfg.bf_theta;
        demo.eps = cfg.bf_eps;
        demo.lambda = cfg.bf_lambda;
        demo.k0 = cfg.bf_k0;
        demo.m_cap = cfg.build.m_cap;
        for (int t = 0; t < cfg.bf_gamma_count; ++t) {
            const double frac = cfg.bf_gamma_count > 1
                                    ? static_cast<double>(t) / static_cast<double>(cfg.bf_gamma_count - 1)
                                    : 0.0;
            demo.gamma_sample.emplace_back(cfg.bf_gamma_min +
                                               frac * (cfg.bf_gamma_max - cfg.bf_gamma_min),
                                           0.0);
        }
        if (cfg.bf_targets.empty()) {
            // five targets spread over the reachable band in modulus and phase
            for (int t = 0; t < 5; ++t) {
                const double mod = cfg.bf_lambda *
                                   (cfg.bf_gamma_min + (0.15 + 0.175 * t) *
                                                           (cfg.bf_gamma_max - cfg.bf_gamma_min));
                const double ang = -2.5 + 1.25 * t;
                demo.a_targets.push_back(std::polar(mod, ang));
            }
        } else {
            for (const auto& t : cfg.bf_targets) {
                if (t.size() != 2) fail(ErrorCode::InvalidInput, "targets must be [re, im] pairs");
                demo.a_targets.emplace_back(t[0], t[1]);
            }
        }
        const BFDemoReport report = bf_counterexample_demo(demo);
        json out = encode(report);
        out["config"] = config_echo(cfg);
        emit(cfg, out.dump(2));
        return report.all_ok ? kExitOk : kExitViolation;
    } catch (const Error& e) {
        return map_error(e, false);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
}

} // namespace gammadyn::cli
