#pragma once

#include <string>
#include <vector>

#include "sdverify/canonical_json.hpp"
#include "sdverify/verifier.hpp"

namespace sdverify {

json to_json(const CharacteristicVerdict& verdict);
json to_json(const MemberReport& report);
json to_json(const VerifierConfig& config);

/// Inverse of to_json. Throws FormatError on shape mismatch.
CharacteristicVerdict verdict_from_json(const json& doc);
MemberReport member_report_from_json(const json& doc);

/// Applies a partial config object ({"theta_min": 2.5, ...}) onto `base`.
/// Unknown keys or wrong types throw ValidationError. The result is validated.
VerifierConfig apply_config_overrides(VerifierConfig base, const json& overrides);

/// Canonical JSON array of reports (sorted keys, six fractional digits).
std::string canonical_reports(const std::vector<MemberReport>& reports);

}  // namespace sdverify
