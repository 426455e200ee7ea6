#pragma once

// CSV and JSON renderings of bound tables and verification sweeps.
//
// CSV column order is frozen:
//   d,n,pattern,u,scale,constant_name,constant_value,bound_raw,bound_capped,
//   p_hat,ci_low,ci_high,hits,samples,seed,verdict
// with one row per (query, constant).  Rows without a Monte Carlo estimate
// leave the estimate columns empty.  Numbers use the shortest representation
// that round-trips, so equal inputs give byte-identical output.

#include "sphtail/bounds.hpp"
#include "sphtail/sweep.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sphtail {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite.
std::string format_double(double x);

std::string csv_header();

struct BoundRow {
    int d;
    std::string pattern;
    std::size_t n;
    double u;
    BoundResult bound;
};

struct ReportMeta {
    std::uint64_t seed = 0;
    bool timestamp = true;
};

std::string bound_table_csv(const std::vector<BoundRow>& rows);
std::string bound_table_json(const std::vector<BoundRow>& rows, const ReportMeta& meta);

std::string verify_csv(const VerifyReport& report);
std::string verify_json(const VerifyReport& report, const ReportMeta& meta);

/// Current UTC time in ISO 8601 form.
std::string utc_timestamp();

}  // namespace sphtail
