#include "gammadyn/serialize.hpp"

#include <fstream>

namespace gammadyn {

namespace {

json encode_cplx(cplx c) { return json::array({c.real(), c.imag()}); }

cplx decode_cplx(const json& j) {
    if (!j.is_array() || j.size() != 2) fail(ErrorCode::InvalidInput, "complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

json encode(const SparseSeq& s) {
    json arr = json::array();
    for (const auto& [idx, c] : s.entries()) arr.push_back(json::array({idx, c.real(), c.imag()}));
    return arr;
}

SparseSeq decode_sparse_seq(const json& j) {
    if (!j.is_array()) fail(ErrorCode::InvalidInput, "sparse sequence must be an array");
    std::vector<SparseSeq::Entry> entries;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 3)
            fail(ErrorCode::InvalidInput, "sparse entry must be [index, re, im]");
        entries.emplace_back(t[0].get<std::int64_t>(), cplx(t[1].get<double>(), t[2].get<double>()));
    }
    return SparseSeq::from_entries(std::move(entries));
}

json encode(const DirectSumVec& v) {
    json obj = json::object();
    for (const auto& [i, seq] : v.blocks()) obj[std::to_string(i)] = encode(seq);
    return obj;
}

DirectSumVec decode_direct_sum(const json& j) {
    if (!j.is_object()) fail(ErrorCode::InvalidInput, "direct sum must be an object");
    std::vector<DirectSumVec::Block> blocks;
    for (auto it = j.begin(); it != j.end(); ++it)
        blocks.emplace_back(std::stoi(it.key()), decode_sparse_seq(it.value()));
    return DirectSumVec::from_blocks(std::move(blocks));
}

json encode(const CVec& v) {
    json arr = json::array();
    for (cplx c : v) arr.push_back(encode_cplx(c));
    return arr;
}

CVec decode_cvec(const json& j) {
    CVec v;
    for (const auto& c : j) v.push_back(decode_cplx(c));
    return v;
}

json encode(const OperatorSpec& op) {
    json j{{"block0", profile_name(op.block0)}, {"tail", "V"}, {"blocks", op.blocks}};
    if (op.rotation_theta) j["rotation_theta"] = *op.rotation_theta;
    return j;
}

OperatorSpec decode_operator_spec(const json& j) {
    OperatorSpec op;
    op.block0 = profile_from_name(j.at("block0").get<std::string>());
    op.blocks = j.at("blocks").get<int>();
    if (j.contains("rotation_theta") && !j["rotation_theta"].is_null())
        op.rotation_theta = j["rotation_theta"].get<double>();
    return op;
}

json encode(const NonHypercyclicityCertificate& c) {
    return json{{"verdict", verdict_name(c.verdict)},
                {"witness_block", c.witness_block},
                {"evidence", c.evidence},
                {"spot_checks", c.spot_checks}};
}

NonHypercyclicityCertificate decode_certificate(const json& j) {
    NonHypercyclicityCertificate c;
    const std::string v = j.at("verdict").get<std::string>();
    c.verdict = v == "Expansive"      ? NonHypVerdict::Expansive
                : v == "PowerBounded" ? NonHypVerdict::PowerBounded
                                      : NonHypVerdict::None;
    c.witness_block = j.at("witness_block").get<int>();
    c.evidence = j.value("evidence", "");
    c.spot_checks = j.value("spot_checks", 0);
    return c;
}

json encode(const ScalarSet& s) {
    json vecs = json::array();
    for (const auto& v : s.vectors) vecs.push_back(encode(v));
    return json{{"ambient", s.ambient == Ambient::Finite ? "finite" : "sequence"},
                {"dim", s.dim},
                {"vectors", vecs},
                {"asymptotics",
                 json{{"kind", asym_kind_name(s.asymptotics.kind)},
                      {"coordinate", s.asymptotics.coordinate}}}};
}

ScalarSet decode_scalar_set(const json& j) {
    ScalarSet s;
    if (!j.is_object() || !j.contains("ambient") || !j["ambient"].is_string())
        fail(ErrorCode::InvalidInput, "scalar set needs an 'ambient' string");
    const std::string amb = j.at("ambient").get<std::string>();
    if (amb == "finite")
        s.ambient = Ambient::Finite;
    else if (amb == "sequence")
        s.ambient = Ambient::Sequence;
    else
        fail(ErrorCode::InvalidInput, "ambient must be 'finite' or 'sequence'");
    s.dim = j.value("dim", 0);
    if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty())
        fail(ErrorCode::InvalidInput, "scalar set needs a non-empty 'vectors' array");
    for (const auto& v : j["vectors"]) s.vectors.push_back(decode_cvec(v));
    if (j.contains("asymptotics") && !j["asymptotics"].is_null()) {
        s.asymptotics.kind = asym_kind_from_name(j["asymptotics"].value("kind", "none"));
        s.asymptotics.coordinate = j["asymptotics"].value("coordinate", -1);
    }
    if (s.ambient == Ambient::Finite) {
        std::size_t max_len = 0;
        for (const auto& v : s.vectors) max_len = std::max(max_len, v.size());
        if (s.dim == 0)
            s.dim = max_len; // absent: infer the ambient dimension
        else if (max_len > s.dim)
            fail(ErrorCode::InvalidInput, "sample vector exceeds the declared dimension");
    }
    return s;
}

json encode(const CoverReport& r) {
    json annuli = json::array();
    for (const auto& a : r.annuli)
        annuli.push_back(json{{"direction", encode(a.direction)},
                              {"a", a.a},
                              {"b", a.b},
                              {"members", a.members}});
    return json{{"coverable", r.coverable},
                {"annuli", annuli},
                {"unassigned", r.unassigned},
                {"flags", r.flags},
                {"notes", r.notes},
                {"tol", r.tol},
                {"max_modulus_ratio", r.max_modulus_ratio},
                {"spacing_head", r.spacing_head},
                {"spacing_tail", r.spacing_tail}};
}

json encode(const BasisExtraction& ex) {
    json basis = json::array(), coords = json::array(), samples = json::array();
    for (const auto& f : ex.basis) basis.push_back(encode(f));
    for (const auto& row : ex.coords) {
        json r = json::array();
        for (cplx c : row) r.push_back(encode_cplx(c));
        coords.push_back(r);
    }
    for (const auto& s : ex.samples) samples.push_back(encode(s));
    return json{{"mode", ex.mode == Ambient::Finite ? "finite" : "sequence"},
                {"subsequence", ex.subsequence},
                {"basis", basis},
                {"L", ex.L},
                {"I1", ex.I1},
                {"I2", ex.I2},
                {"pivot", ex.pivot},
                {"regime", regime_name(ex.regime)},
                {"coords", coords},
                {"tail_l2", ex.tail_l2},
                {"samples", samples}};
}

BasisExtraction decode_extraction(const json& j) {
    BasisExtraction ex;
    ex.mode = j.at("mode").get<std::string>() == "finite" ? Ambient::Finite : Ambient::Sequence;
    ex.subsequence = j.at("subsequence").get<std::vector<std::size_t>>();
    for (const auto& f : j.at("basis")) ex.basis.push_back(decode_cvec(f));
    ex.L = j.at("L").get<std::size_t>();
    ex.I1 = j.at("I1").get<std::vector<int>>();
    ex.I2 = j.at("I2").get<std::vector<int>>();
    ex.pivot = j.at("pivot").get<std::size_t>();
    ex.regime = j.at("regime").get<std::string>() == "ToZero" ? Regime::ToZero : Regime::ToInfinity;
    for (const auto& row : j.at("coords")) {
        std::vector<cplx> r;
        for (const auto& c : row) r.push_back(decode_cplx(c));
        ex.coords.push_back(std::move(r));
    }
    ex.tail_l2 = j.at("tail_l2").get<std::vector<double>>();
    for (const auto& s : j.at("samples")) ex.samples.push_back(decode_cvec(s));
    return ex;
}

json encode(const TargetSequence& t) {
    json entries = json::array();
    for (const auto& y : t.entries) entries.push_back(encode(y));
    return json{{"mode", mode_name(t.mode)},
                {"block_limit", t.block_limit},
                {"scale_log2", t.scale_log2},
                {"entries", entries},
                {"degrees", t.degrees}};
}

TargetSequence decode_targets(const json& j) {
    TargetSequence t;
    t.mode = j.at("mode").get<std::string>() == "finite" ? Mode::FiniteDim : Mode::Infinite;
    t.block_limit = j.at("block_limit").get<int>();
    t.scale_log2 = j.at("scale_log2").get<int>();
    for (const auto& y : j.at("entries")) t.entries.push_back(decode_direct_sum(y));
    t.degrees = j.at("degrees").get<std::vector<int>>();
    return t;
}

json encode(const ConditionInstance& c) {
    return json{{"k", c.k},     {"id", c.id},   {"i", c.i},               {"j", c.j},
                {"lhs", c.lhs}, {"rhs", c.rhs}, {"equality", c.equality}, {"pass", c.pass},
                {"margin", c.margin}};
}

ConditionInstance decode_condition(const json& j) {
    ConditionInstance c;
    c.k = j.at("k").get<int>();
    c.id = j.at("id").get<std::string>();
    c.i = j.at("i").get<int>();
    c.j = j.at("j").get<int>();
    c.lhs = j.at("lhs").get<double>();
    c.rhs = j.at("rhs").get<double>();
    c.equality = j.at("equality").get<bool>();
    c.pass = j.at("pass").get<bool>();
    c.margin = j.at("margin").get<double>();
    return c;
}

json encode(const Schedule& s) {
    json conditions = json::array();
    for (const auto& c : s.conditions) conditions.push_back(encode(c));
    json ub = json::array();
    for (const auto& u : s.uniform_bound)
        ub.push_back(json{{"k", u.k}, {"j", u.j}, {"lhs", u.lhs}, {"rhs", u.rhs}, {"holds", u.holds}});
    return json{{"mode", mode_name(s.mode)},
                {"regime", regime_name(s.regime)},
                {"phi", s.phi},
                {"m", s.m},
                {"conditions", conditions},
                {"uniform_bound", ub},
                {"margin_rel", s.margin_rel}};
}

Schedule decode_schedule(const json& j) {
    Schedule s;
    s.mode = j.at("mode").get<std::string>() == "finite" ? Mode::FiniteDim : Mode::Infinite;
    s.regime = j.at("regime").get<std::string>() == "ToZero" ? Regime::ToZero : Regime::ToInfinity;
    s.phi = j.at("phi").get<std::vector<std::size_t>>();
    s.m = j.at("m").get<std::vector<std::int64_t>>();
    for (const auto& c : j.at("conditions")) s.conditions.push_back(decode_condition(c));
    for (const auto& u : j.at("uniform_bound")) {
        UniformBoundCheck b;
        b.k = u.at("k").get<int>();
        b.j = u.at("j").get<int>();
        b.lhs = u.at("lhs").get<double>();
        b.rhs = u.at("rhs").get<double>();
        b.holds = u.at("holds").get<bool>();
        s.uniform_bound.push_back(b);
    }
    s.margin_rel = j.at("margin_rel").get<double>();
    return s;
}

json encode(const ConstructedFamily& f) {
    json zt = json::array(), z = json::array();
    for (const auto& v : f.z_tilde) zt.push_back(encode(v));
    for (const auto& v : f.z) z.push_back(encode(v));
    return json{{"z_tilde", zt}, {"norms", f.norms}, {"z", z}, {"includes_e0", f.includes_e0}};
}

ConstructedFamily decode_family(const json& j) {
    ConstructedFamily f;
    for (const auto& v : j.at("z_tilde")) f.z_tilde.push_back(decode_direct_sum(v));
    f.norms = j.at("norms").get<std::vector<double>>();
    for (const auto& v : j.at("z")) f.z.push_back(decode_direct_sum(v));
    f.includes_e0 = j.at("includes_e0").get<bool>();
    return f;
}

json encode(const SetOptions& o) {
    return json{{"cover_tol", o.cover_tol},
                {"max_annuli", o.max_annuli},
                {"modulus_ratio_limit", o.modulus_ratio_limit},
                {"spacing_decay", o.spacing_decay},
                {"line_tol", o.line_tol},
                {"line_limit", o.line_limit},
                {"trend_factor", o.trend_factor},
                {"min_trend_len", o.min_trend_len},
                {"sep_tol", o.sep_tol},
                {"growth_abs", o.growth_abs},
                {"nonzero_tol", o.nonzero_tol},
                {"rejection_budget", o.rejection_budget},
                {"seed", o.seed}};
}

SetOptions decode_set_options(const json& j) {
    SetOptions o;
    o.cover_tol = j.value("cover_tol", o.cover_tol);
    o.max_annuli = j.value("max_annuli", o.max_annuli);
    o.modulus_ratio_limit = j.value("modulus_ratio_limit", o.modulus_ratio_limit);
    o.spacing_decay = j.value("spacing_decay", o.spacing_decay);
    o.line_tol = j.value("line_tol", o.line_tol);
    o.line_limit = j.value("line_limit", o.line_limit);
    o.trend_factor = j.value("trend_factor", o.trend_factor);
    o.min_trend_len = j.value("min_trend_len", o.min_trend_len);
    o.sep_tol = j.value("sep_tol", o.sep_tol);
    o.growth_abs = j.value("growth_abs", o.growth_abs);
    o.nonzero_tol = j.value("nonzero_tol", o.nonzero_tol);
    o.rejection_budget = j.value("rejection_budget", o.rejection_budget);
    o.seed = j.value("seed", o.seed);
    return o;
}

json encode(const BuildOptions& o) {
    return json{{"K", o.K},
                {"seed", o.seed},
                {"margin_rel", o.margin_rel},
                {"m_cap", o.m_cap},
                {"phi_cap", o.phi_cap == static_cast<std::size_t>(-1) ? json(nullptr) : json(o.phi_cap)},
                {"target_scale_log2", o.target_scale_log2},
                {"set", encode(o.set)}};
}

BuildOptions decode_build_options(const json& j) {
    BuildOptions o;
    o.K = j.value("K", o.K);
    o.seed = j.value("seed", o.seed);
    o.margin_rel = j.value("margin", j.value("margin_rel", o.margin_rel));
    o.m_cap = j.value("m_cap", o.m_cap);
    if (j.contains("phi_cap") && !j["phi_cap"].is_null())
        o.phi_cap = j["phi_cap"].get<std::size_t>();
    o.target_scale_log2 = j.value("target_scale_log2", o.target_scale_log2);
    if (j.contains("set")) o.set = decode_set_options(j["set"]);
    return o;
}

json encode(const CounterexampleBundle& b) {
    return json{{"format", "gammadyn-bundle-v1"},
                {"config", encode(b.config)},
                {"ambient", b.ambient == Ambient::Finite ? "finite" : "sequence"},
                {"extraction", encode(b.extraction)},
                {"targets", encode(b.targets)},
                {"schedule", encode(b.schedule)},
                {"family", encode(b.family)},
                {"normalizer", b.normalizer},
                {"operator", encode(b.op)},
                {"certificate", encode(b.certificate)}};
}

CounterexampleBundle decode_bundle(const json& j) {
    if (j.value("format", "") != "gammadyn-bundle-v1")
        fail(ErrorCode::InvalidInput, "not a gammadyn bundle");
    CounterexampleBundle b;
    b.config = decode_build_options(j.at("config"));
    b.ambient = j.at("ambient").get<std::string>() == "finite" ? Ambient::Finite : Ambient::Sequence;
    b.extraction = decode_extraction(j.at("extraction"));
    b.targets = decode_targets(j.at("targets"));
    b.schedule = decode_schedule(j.at("schedule"));
    b.family = decode_family(j.at("family"));
    b.normalizer = j.at("normalizer").get<std::vector<double>>();
    b.op = decode_operator_spec(j.at("operator"));
    b.certificate = decode_certificate(j.at("certificate"));
    return b;
}

json encode(const ConditionReport& r) {
    json inst = json::array();
    for (const auto& c : r.instances) inst.push_back(encode(c));
    json st = json::array();
    for (const auto& s : r.structural)
        st.push_back(json{{"name", s.name},
                          {"pass", s.pass},
                          {"value", s.value},
                          {"limit", s.limit},
                          {"note", s.note}});
    return json{{"instances", inst},
                {"structural", st},
                {"all_pass", r.all_pass},
                {"first_violation", r.first_violation}};
}

json encode(const OrbitErrorReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back(json{{"k", row.k},
                            {"m", row.m},
                            {"e", row.e},
                            {"b", row.b},
                            {"margin", row.margin},
                            {"pass", row.pass}});
    return json{{"rows", rows}, {"slack", r.slack}, {"all_pass", r.all_pass}};
}

json encode(const BFDemoReport& r) {
    json rows = json::array();
    for (const auto& t : r.rows)
        rows.push_back(json{{"a", encode_cplx(t.a)},
                            {"k", t.k},
                            {"gamma", encode_cplx(t.gamma)},
                            {"n", t.n},
                            {"achieved", t.achieved},
                            {"shift_err", t.shift_err},
                            {"phase_chord", t.phase_chord},
                            {"phase_contrib", t.phase_contrib},
                            {"modulus_gap", t.modulus_gap},
                            {"audit_ok", t.audit_ok},
                            {"within_eps", t.within_eps}});
    return json{{"theta", r.theta},
                {"lambda", r.lambda},
                {"eps", r.eps},
                {"k0", r.k0},
                {"rows", rows},
                {"schedule_m", r.schedule_m},
                {"target_norms", r.target_norms},
                {"all_ok", r.all_ok}};
}

json encode(const TransportReport& r) {
    return json{{"perm", r.perm},
                {"original_errors", r.original_errors},
                {"transported_errors", r.transported_errors},
                {"max_error_delta", r.max_error_delta},
                {"errors_equal", r.errors_equal},
                {"verdicts_equal", r.verdicts_equal},
                {"pass", r.pass}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidInput, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorCode::InvalidInput, "malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    out << text;
}

} // namespace gammadyn
