#pragma once

#include <string>
#include <vector>

namespace defcyc {

struct CaseRecord {
    std::string name;
    int order = 0;       // group order, modulus, or denominator; 0 if n/a
    std::string verdict; // "pass" | "fail" | "skip"
    std::string witness; // concrete witness on failure, reason on skip
    long long millis = 0;
};

/// Machine-readable result of a verification suite. Orderings are
/// canonical, so reports are byte-identical across runs of the same
/// version on the same inputs (timing is only emitted on request).
struct Report {
    std::string suite;
    std::string version;
    std::vector<CaseRecord> cases;

    int passed() const;
    int failed() const;
    int skipped() const;
};

/// JSON per the schema {suite, version, cases:[{name, order, verdict,
/// witness?, millis}], summary:{pass, fail, skip}}. millis is 0 unless
/// with_timing is set, keeping default output reproducible byte-for-byte.
std::string report_json(const Report& r, bool with_timing = false);

/// Plain-text table from the same value.
std::string report_table(const Report& r);

} // namespace defcyc
