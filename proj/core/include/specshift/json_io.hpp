#pragma once

#include <nlohmann/json.hpp>

#include "specshift/commuting.hpp"
#include "specshift/construct.hpp"
#include "specshift/loewner.hpp"
#include "specshift/opcalc.hpp"

namespace specshift {

using Json = nlohmann::json;

/// {"dim": n, "re": [[...]], "im": [[...]]}.
Json to_json(const HermitianOperator& a);

/// Reads the matrix exchange format; "im" defaults to zero. Unlike the in-memory
/// constructor this does not symmetrize silently: input further than
/// 1e-12 max(1, max|entry|) from Hermitian is a DomainError. Bad shapes are BadParams,
/// NaN or infinite entries NonFinite.
HermitianOperator hermitian_from_json(const Json& j);

/// {"function", "norm_kind", "value", "A", "B", "seed", "budget"}; A and B are null for
/// a degenerate search.
Json to_json(const SeminormLowerBound& bound, const std::string& function_id);

/// Array of blocks {"n", "delta", "target_ratio", "achieved_ratio", "multiplicity",
/// "increment_s1", "A", "B", "status"}; a failed block, if any, comes last.
Json to_json(const DivergentFamily& family);

/// {"function", "K", "t", "s", "n"} with n as decimal strings.
Json to_json(const SequenceWitness& w);
SequenceWitness sequence_witness_from_json(const Json& j);

/// {"id": "...", "params": [...]} -> catalog function.
ScalarFunction function_from_json(const Json& j);
Json function_reference(const ScalarFunction& f);

}  // namespace specshift
