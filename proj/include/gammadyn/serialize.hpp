#pragma once

#include <string>

#include <json.hpp>

#include "gammadyn/certify.hpp"
#include "gammadyn/construction.hpp"

namespace gammadyn {

using json = nlohmann::json;

// SparseSeq <-> sorted [index, re, im] triples; DirectSumVec <-> object
// keyed by the block index as a string.
json encode(const SparseSeq& s);
SparseSeq decode_sparse_seq(const json& j);
json encode(const DirectSumVec& v);
DirectSumVec decode_direct_sum(const json& j);

json encode(const CVec& v);
CVec decode_cvec(const json& j);

json encode(const OperatorSpec& op);
OperatorSpec decode_operator_spec(const json& j);
json encode(const NonHypercyclicityCertificate& c);
NonHypercyclicityCertificate decode_certificate(const json& j);

json encode(const ScalarSet& s);
ScalarSet decode_scalar_set(const json& j);
json encode(const CoverReport& r);

json encode(const BasisExtraction& ex);
BasisExtraction decode_extraction(const json& j);

json encode(const TargetSequence& t);
TargetSequence decode_targets(const json& j);

json encode(const ConditionInstance& c);
ConditionInstance decode_condition(const json& j);
json encode(const Schedule& s);
Schedule decode_schedule(const json& j);

json encode(const ConstructedFamily& f);
ConstructedFamily decode_family(const json& j);

json encode(const SetOptions& o);
SetOptions decode_set_options(const json& j);
json encode(const BuildOptions& o);
BuildOptions decode_build_options(const json& j);

json encode(const CounterexampleBundle& b);
CounterexampleBundle decode_bundle(const json& j);

json encode(const ConditionReport& r);
json encode(const OrbitErrorReport& r);
json encode(const BFDemoReport& r);
json encode(const TransportReport& r);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace gammadyn
