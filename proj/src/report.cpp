#include "sphtail/report.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

namespace sphtail {

namespace {

using nlohmann::json;

constexpr const char* kColumns[] = {"d",      "n",        "pattern",     "u",         "scale", "constant_name",
                                    "constant_value", "bound_raw", "bound_capped", "p_hat", "ci_low",
                                    "ci_high", "hits", "samples", "seed", "verdict"};

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void write_row(std::ostringstream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << quote_if_needed(fields[i]);
    }
    os << '\n';
}

std::vector<std::string> bound_fields(int d, std::size_t n, const std::string& pattern, double u,
                                      const BoundResult& b) {
    return {std::to_string(d),
            std::to_string(n),
            pattern,
            format_double(u),
            format_double(b.scale),
            std::string(to_string(b.constant.name)),
            format_double(b.constant.value),
            format_double(b.raw),
            format_double(b.capped)};
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json meta_json(const ReportMeta& meta) {
    json m;
    m["seed"] = meta.seed;
    m["version"] = kVersion;
    m["timestamp"] = meta.timestamp ? json(utc_timestamp()) : json(nullptr);
    return m;
}

json bound_json(const BoundResult& b) {
    return {{"constant_name", std::string(to_string(b.constant.name))},
            {"constant_value", b.constant.value},
            {"scale", b.scale},
            {"raw", b.raw},
            {"capped", b.capped}};
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

std::string csv_header() {
    std::ostringstream os;
    write_row(os, {std::begin(kColumns), std::end(kColumns)});
    return os.str();
}

std::string bound_table_csv(const std::vector<BoundRow>& rows) {
    std::ostringstream os;
    os << csv_header();
    for (const auto& r : rows) {
        auto fields = bound_fields(r.d, r.n, r.pattern, r.u, r.bound);
        fields.resize(std::size(kColumns));
        write_row(os, fields);
    }
    return os.str();
}

std::string bound_table_json(const std::vector<BoundRow>& rows, const ReportMeta& meta) {
    json records = json::array();
    for (const auto& r : rows) {
        json rec = bound_json(r.bound);
        rec["d"] = r.d;
        rec["n"] = r.n;
        rec["pattern"] = r.pattern;
        rec["u"] = r.u;
        records.push_back(std::move(rec));
    }
    json doc{{"meta", meta_json(meta)}, {"records", std::move(records)}};
    return doc.dump(2) + "\n";
}

std::string verify_csv(const VerifyReport& report) {
    std::ostringstream os;
    os << csv_header();
    for (const auto& rec : report.records) {
        for (const auto& check : rec.checks) {
            auto fields = bound_fields(rec.d, rec.coeffs.size(), rec.pattern, rec.u, check.bound);
            fields.push_back(format_double(rec.lhs.p_hat));
            fields.push_back(format_double(rec.lhs.ci_low));
            fields.push_back(format_double(rec.lhs.ci_high));
            fields.push_back(std::to_string(rec.lhs.hits));
            fields.push_back(std::to_string(rec.lhs.n_samples));
            fields.push_back(std::to_string(rec.lhs.seed));
            fields.push_back(std::string(to_string(check.verdict)));
            write_row(os, fields);
        }
    }
    return os.str();
}

std::string verify_json(const VerifyReport& report, const ReportMeta& meta) {
    json records = json::array();
    for (const auto& rec : report.records) {
        json bounds = json::array();
        for (const auto& check : rec.checks) {
            json b = bound_json(check.bound);
            b["verdict"] = std::string(to_string(check.verdict));
            bounds.push_back(std::move(b));
        }
        records.push_back({
            {"query", {{"d", rec.d}, {"n", rec.coeffs.size()}, {"pattern", rec.pattern}, {"coeffs", rec.coeffs},
                       {"u", rec.u}, {"scale", rec.scale}}},
            {"lhs",
             {{"p_hat", rec.lhs.p_hat},
              {"ci_low", rec.lhs.ci_low},
              {"ci_high", rec.lhs.ci_high},
              {"hits", rec.lhs.hits},
              {"samples", rec.lhs.n_samples},
              {"seed", rec.lhs.seed},
              {"alpha", rec.lhs.alpha}}},
            {"bounds", std::move(bounds)},
            {"gaussian_tail", number_or_null(rec.gaussian_tail)},
            {"ratio_upper", number_or_null(rec.ratio_upper)},
            {"ratio_hat", number_or_null(rec.ratio_hat)},
            {"verdict", std::string(to_string(rec.verdict))},
        });
    }
    const auto& s = report.summary;
    json doc{{"meta", meta_json(meta)},
             {"records", std::move(records)},
             {"summary",
              {{"holds", s.holds},
               {"violated", s.violated},
               {"inconclusive", s.inconclusive},
               {"max_ratio_upper", number_or_null(s.max_ratio_upper)},
               {"max_ratio_hat", number_or_null(s.max_ratio_hat)}}}};
    return doc.dump(2) + "\n";
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace sphtail
