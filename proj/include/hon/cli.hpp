#ifndef HON_CLI_HPP
#define HON_CLI_HPP

// Commands behind the `hon` executable: eval, sweep, threshold, table1 and
// verify-ordering, plus their CSV / JSON-lines renderers. Kept in the
// library so tests can drive them without a process boundary.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include <hon/criteria.hpp>
#include <hon/errors.hpp>
#include <hon/fock_states.hpp>
#include <hon/multiphoton.hpp>
#include <hon/operator_oracle.hpp>
#include <hon/state_spec.hpp>

namespace hon::cli
{

inline constexpr double kIndeterminateTolerance = 1e-8;
inline constexpr double kDefaultThresholdTolerance = 1e-5;
inline constexpr int kMaxVerifyQuadrature = 16;
inline constexpr int kMaxVerifyNumber = 10;

/// One criterion at one order. For hosps_dh the order is n (the result
/// reports n - 1); for hoa_lee_R `secondary` is m.
struct CriterionRequest {
    Criterion criterion = Criterion::hoa_d;
    int order = 1;
    std::optional<int> secondary;

    friend bool operator==(const CriterionRequest &, const CriterionRequest &) = default;
};

struct EvalOptions {
    std::optional<int> ladder;   // routes hos_shm to the Brandt-Greenberg form
    bool closed_form = false;    // binomial / nlvss / nless closed forms
    double indeterminate_tolerance = kIndeterminateTolerance;
};

inline std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string format_order(const CriterionResult &r)
{
    std::string out = std::to_string(r.order);
    if (r.secondary_order) {
        out += ":" + std::to_string(*r.secondary_order);
    }
    return out;
}

/// Order label a request will be reported under (hosps_dh n becomes n - 1).
inline std::string format_order(const CriterionRequest &req)
{
    std::string out = std::to_string(req.criterion == Criterion::hosps_dh ? req.order - 1 : req.order);
    if (req.secondary) {
        out += ":" + std::to_string(*req.secondary);
    }
    return out;
}

inline std::string verdict(const CriterionResult &r, double tol)
{
    if (std::fabs(r.value) < tol) {
        return "indeterminate";
    }
    return r.nonclassical ? "nonclassical" : "classical";
}

/// Parses `name`, `name:order` or `hoa_lee_R:l:m`; `default_order` fills a
/// missing order.
inline CriterionRequest parse_criterion_request(std::string_view token, std::optional<int> default_order)
{
    std::vector<std::string> parts;
    std::string current;
    for (char c : token) {
        if (c == ':') {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    if (parts.empty() || parts.size() > 3) {
        throw UsageError("criterion \"" + std::string(token) + "\": expected name[:order[:m]]");
    }
    const auto c = parse_criterion(parts[0]);
    if (!c) {
        throw UsageError("unknown criterion \"" + parts[0] + "\"");
    }
    auto parse_int = [&](const std::string &s) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used != s.size()) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::exception &) {
            throw UsageError("criterion \"" + std::string(token) + "\": bad integer \"" + s + "\"");
        }
    };
    CriterionRequest req;
    req.criterion = *c;
    if (parts.size() >= 2) {
        req.order = parse_int(parts[1]);
    } else if (default_order) {
        req.order = *default_order;
    } else {
        throw UsageError("criterion " + parts[0] + " needs an order (name:order or --order)");
    }
    if (parts.size() == 3) {
        if (*c != Criterion::hoa_lee_R) {
            throw UsageError("only hoa_lee_R takes a second order");
        }
        req.secondary = parse_int(parts[2]);
    } else if (*c == Criterion::hoa_lee_R) {
        req.secondary = 1;
    }
    return req;
}

/// Criteria evaluated when none are named.
inline std::vector<CriterionRequest> default_criteria()
{
    std::vector<CriterionRequest> out;
    for (int l = 1; l <= 5; ++l) {
        out.push_back({Criterion::hoa_d, l, std::nullopt});
    }
    out.push_back({Criterion::hoa_lee_R, 2, 1});
    out.push_back({Criterion::hoa_lee_R, 3, 2});
    for (int l = 1; l <= 3; ++l) {
        out.push_back({Criterion::hoa_ba_an_A, l, std::nullopt});
    }
    for (int n = 2; n <= 6; ++n) {
        out.push_back({Criterion::hosps_dh, n, std::nullopt});
    }
    for (int n = 2; n <= 6; n += 2) {
        out.push_back({Criterion::hos_shm, n, std::nullopt});
    }
    return out;
}

namespace detail
{

inline CriterionResult evaluate_closed_form(const StateSpec &spec, const CriterionRequest &req)
{
    double value = 0.0;
    switch (spec.family) {
        case StateFamily::binomial:
            value = closed_form_binomial(req.criterion, hon::detail::int_param(spec, "M"),
                                         hon::detail::real_param(spec, "p"), req.order);
            break;
        case StateFamily::nlvss:
        case StateFamily::nless: {
            const auto fam = spec.family == StateFamily::nless ? NonlinearFamily::nless : NonlinearFamily::nlvss;
            const std::optional<int> truncation = spec.truncation ? spec.truncation : truncation_override();
            value = closed_form_nonlinear(req.criterion, fam, hon::detail::real_param(spec, "r"), req.order,
                                          truncation);
            break;
        }
        default:
            throw DomainError("no closed form for family " + std::string(to_string(spec.family)));
    }
    const int reported = req.criterion == Criterion::hosps_dh ? req.order - 1 : req.order;
    return make_result(req.criterion, reported, value, EvaluationPath::closed_form);
}

} // namespace detail

inline CriterionResult evaluate(const StateSpec &spec, const State &state, const CriterionRequest &req,
                                const EvalOptions &opts)
{
    if (opts.closed_form) {
        return detail::evaluate_closed_form(spec, req);
    }
    switch (req.criterion) {
        case Criterion::hoa_d:
            return hoa_d(state, req.order);
        case Criterion::hoa_lee_R:
            return hoa_lee_R(state, req.order, req.secondary.value_or(1));
        case Criterion::hoa_ba_an_A:
            return hoa_ba_an_A(state, req.order);
        case Criterion::hosps_dh:
            return hosps_dh(state, req.order);
        case Criterion::hos_shm:
            if (opts.ladder) {
                return hos_shm_bg(BGLadder(*opts.ladder), state, req.order);
            }
            return hos_shm(state, req.order);
        case Criterion::hos_bg:
            return hos_shm_bg(BGLadder(opts.ladder.value_or(1)), state, req.order);
    }
    throw UsageError("unhandled criterion");
}

// ---------------------------------------------------------------------------
// eval

inline std::vector<CriterionResult> cmd_eval(const StateSpec &spec, const std::vector<CriterionRequest> &criteria,
                                             const EvalOptions &opts = {})
{
    const State state = opts.closed_form ? State{FockExpansion::number_state(0)} : materialize(spec);
    std::vector<CriterionResult> out;
    out.reserve(criteria.size());
    for (const auto &req : criteria) {
        out.push_back(evaluate(spec, state, req, opts));
    }
    return out;
}

inline std::string render_eval_csv(const std::vector<CriterionResult> &rows, double tol)
{
    std::string out = "criterion,order,value,nonclassical,verdict,path\n";
    for (const auto &r : rows) {
        out += std::string(to_string(r.criterion)) + "," + format_order(r) + "," + format_number(r.value) + "," +
               (r.nonclassical ? "true" : "false") + "," + verdict(r, tol) + "," + std::string(to_string(r.path)) +
               "\n";
    }
    return out;
}

inline std::string json_string(std::string_view s)
{
    return nlohmann::json(std::string(s)).dump();
}

inline std::string render_eval_json(const std::vector<CriterionResult> &rows, double tol)
{
    std::string out;
    for (const auto &r : rows) {
        out += "{\"criterion\":" + json_string(to_string(r.criterion)) + ",\"order\":" + std::to_string(r.order);
        if (r.secondary_order) {
            out += ",\"m\":" + std::to_string(*r.secondary_order);
        }
        out += ",\"value\":" + format_number(r.value) + ",\"nonclassical\":" + (r.nonclassical ? "true" : "false") +
               ",\"verdict\":" + json_string(verdict(r, tol)) + ",\"path\":" + json_string(to_string(r.path)) + "}\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRequest {
    StateSpec base;
    std::string param;
    double lo = 0.0;
    double hi = 1.0;
    int points = 2;
    std::vector<CriterionRequest> criteria;
    EvalOptions options;
};

struct SweepRow {
    double param = 0.0;
    std::string criterion;
    std::string order;
    std::optional<double> value;
    bool nonclassical = false;
    std::string error;
};

inline std::vector<double> sweep_grid(double lo, double hi, int points)
{
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = (i == points - 1) ? hi : lo + (hi - lo) * i / (points - 1);
    }
    return grid;
}

inline void validate(const SweepRequest &req)
{
    if (!(req.lo < req.hi)) {
        throw UsageError("sweep: need lo < hi");
    }
    if (req.points < 2) {
        throw UsageError("sweep: need at least 2 points");
    }
    if (req.criteria.empty()) {
        throw UsageError("sweep: no criteria given");
    }
    with_param(req.base, req.param, req.lo); // rejects parameters foreign to the family
}

/// Grid points are evaluated on worker threads; rows come back in grid order
/// with the criteria in request order inside each point.
inline std::vector<SweepRow> cmd_sweep(const SweepRequest &req)
{
    validate(req);
    const std::vector<double> grid = sweep_grid(req.lo, req.hi, req.points);
    std::vector<std::vector<SweepRow>> per_point(grid.size());

    auto run_point = [&](std::size_t idx) {
        const double x = grid[idx];
        auto &rows = per_point[idx];
        auto fail_all = [&](const std::string &msg) {
            for (const auto &c : req.criteria) {
                SweepRow row;
                row.param = x;
                row.criterion = std::string(to_string(c.criterion));
                row.order = format_order(c);
                row.error = msg;
                rows.push_back(row);
            }
        };
        StateSpec spec;
        State state = FockExpansion::number_state(0);
        try {
            spec = with_param(req.base, req.param, x);
            if (!req.options.closed_form) {
                state = materialize(spec);
            }
        } catch (const std::exception &e) {
            fail_all(e.what());
            return;
        }
        for (const auto &c : req.criteria) {
            SweepRow row;
            row.param = x;
            row.criterion = std::string(to_string(c.criterion));
            try {
                const CriterionResult r = evaluate(spec, state, c, req.options);
                row.order = format_order(r);
                row.value = r.value;
                row.nonclassical = r.nonclassical;
            } catch (const std::exception &e) {
                row.order = format_order(c);
                row.error = e.what();
            }
            rows.push_back(row);
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(grid.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            run_point(i);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    std::vector<SweepRow> out;
    for (auto &rows : per_point) {
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

inline std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
    }
    return out + "\"";
}

inline std::string render_sweep_csv(const std::vector<SweepRow> &rows)
{
    std::string out = "param,criterion,order,value,nonclassical,error\n";
    for (const auto &r : rows) {
        out += format_number(r.param) + "," + r.criterion + "," + r.order + "," +
               (r.value ? format_number(*r.value) : std::string()) + "," +
               (r.value ? (r.nonclassical ? "true" : "false") : "") + "," + csv_field(r.error) + "\n";
    }
    return out;
}

inline std::string render_sweep_json(const std::vector<SweepRow> &rows)
{
    std::string out;
    for (const auto &r : rows) {
        out += "{\"param\":" + format_number(r.param) + ",\"criterion\":" + json_string(r.criterion) +
               ",\"order\":" + json_string(r.order) + ",\"value\":" + (r.value ? format_number(*r.value) : "null") +
               ",\"nonclassical\":" + (r.value ? (r.nonclassical ? "true" : "false") : "null") +
               ",\"error\":" + (r.error.empty() ? "null" : json_string(r.error)) + "}\n";
    }
    return out;
}

/// Number of sign changes along one criterion's rows (error rows skipped).
inline int count_sign_changes(const std::vector<SweepRow> &rows)
{
    int changes = 0;
    int last = 0;
    for (const auto &r : rows) {
        if (!r.value || *r.value == 0.0) {
            continue;
        }
        const int s = *r.value < 0 ? -1 : 1;
        if (last != 0 && s != last) {
            ++changes;
        }
        last = s;
    }
    return changes;
}

// ---------------------------------------------------------------------------
// threshold

struct ThresholdRequest {
    StateSpec base;
    std::string param;
    CriterionRequest criterion;
    double lo = 0.0;
    double hi = 1.0;
    double tolerance = kDefaultThresholdTolerance;
    EvalOptions options;
};

struct ThresholdResult {
    double root = 0.0;
    double lo = 0.0; // final bracket
    double hi = 0.0;
    double value_lo = 0.0;
    double value_hi = 0.0;
    int iterations = 0;
};

/// Plain bisection on the criterion value. Endpoint values within the
/// indeterminate band count as zero, so an identically-null criterion has no
/// sign change.
inline ThresholdResult cmd_threshold(const ThresholdRequest &req)
{
    if (!(req.lo < req.hi)) {
        throw UsageError("threshold: need lo < hi");
    }
    if (!(req.tolerance > 0.0)) {
        throw UsageError("threshold: tolerance must be > 0");
    }
    auto f = [&](double x) {
        const StateSpec spec = with_param(req.base, req.param, x);
        const State state = req.options.closed_form ? State{FockExpansion::number_state(0)} : materialize(spec);
        return evaluate(spec, state, req.criterion, req.options).value;
    };
    auto sign = [&](double v) {
        return std::fabs(v) < req.options.indeterminate_tolerance ? 0 : (v < 0 ? -1 : 1);
    };
    ThresholdResult out;
    double a = req.lo, b = req.hi;
    double fa = f(a), fb = f(b);
    const int sa = sign(fa), sb = sign(fb);
    if (sa == 0 || sb == 0 || sa == sb) {
        throw NoSignChangeError("threshold: criterion has no sign change on [" + format_number(a) + ", " +
                                format_number(b) + "] (values " + format_number(fa) + ", " + format_number(fb) + ")");
    }
    int it = 0;
    while ((b - a) / 2 > req.tolerance && it < 200) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        ++it;
        if (fm == 0.0) {
            a = b = mid;
            fa = fb = fm;
            break;
        }
        if ((fm < 0) == (fa < 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    out.root = 0.5 * (a + b);
    out.lo = a;
    out.hi = b;
    out.value_lo = fa;
    out.value_hi = fb;
    out.iterations = it;
    return out;
}

inline std::string render_threshold(const ThresholdResult &r, bool json)
{
    if (json) {
        return "{\"root\":" + format_number(r.root) + ",\"lo\":" + format_number(r.lo) + ",\"hi\":" +
               format_number(r.hi) + ",\"value_lo\":" + format_number(r.value_lo) + ",\"value_hi\":" +
               format_number(r.value_hi) + ",\"iterations\":" + std::to_string(r.iterations) + "}\n";
    }
    return "root,lo,hi,value_lo,value_hi,iterations\n" + format_number(r.root) + "," + format_number(r.lo) + "," +
           format_number(r.hi) + "," + format_number(r.value_lo) + "," + format_number(r.value_hi) + "," +
           std::to_string(r.iterations) + "\n";
}

// ---------------------------------------------------------------------------
// table1: two-level Fock mixtures separating HOA from HOSPS

struct Table1Row {
    std::string label;
    int level_a = 0;
    int level_b = 0;
    CriterionResult antibunching; // d(1)
    CriterionResult sps;          // d_h(1)
    CriterionResult hoa;          // d(3)
    CriterionResult hosps;        // d_h(3)
};

inline std::vector<Table1Row> cmd_table1()
{
    std::vector<Table1Row> rows;
    for (auto [a, b] : {std::pair{3, 8}, std::pair{4, 10}}) {
        const State rho = make_diagonal_mixture({{a, 0.5}, {b, 0.5}});
        Table1Row row;
        row.label = "1/2(|" + std::to_string(a) + "><" + std::to_string(a) + "|+|" + std::to_string(b) + "><" +
                    std::to_string(b) + "|)";
        row.level_a = a;
        row.level_b = b;
        row.antibunching = hoa_d(rho, 1);
        row.sps = hosps_dh(rho, 2);
        row.hoa = hoa_d(rho, 3);
        row.hosps = hosps_dh(rho, 4);
        rows.push_back(row);
    }
    return rows;
}

inline const char *yes_no(const CriterionResult &r)
{
    return r.nonclassical ? "Yes" : "No";
}

inline std::string render_table1(const std::vector<Table1Row> &rows, bool json)
{
    std::ostringstream out;
    if (json) {
        for (const auto &r : rows) {
            out << "{\"state\":" << json_string(r.label) << ",\"antibunching\":{\"flag\":\"" << yes_no(r.antibunching)
                << "\",\"d1\":" << format_number(r.antibunching.value) << "},\"sps\":{\"flag\":\"" << yes_no(r.sps)
                << "\",\"dh1\":" << format_number(r.sps.value) << "},\"hoa\":{\"flag\":\"" << yes_no(r.hoa)
                << "\",\"d3\":" << format_number(r.hoa.value) << "},\"hosps\":{\"flag\":\"" << yes_no(r.hosps)
                << "\",\"dh3\":" << format_number(r.hosps.value) << "}}\n";
        }
        return out.str();
    }
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %-14s %-14s %-16s %-16s\n", "Density matrix", "Antibunching", "SPS",
                  "HOA (l=3)", "HOSPS (n=4)");
    out << line;
    for (const auto &r : rows) {
        auto cell = [](const CriterionResult &c) { return std::string(yes_no(c)) + " (" + format_number(c.value) + ")"; };
        std::snprintf(line, sizeof line, "%-24s %-14s %-14s %-16s %-16s\n", r.label.c_str(),
                      cell(r.antibunching).c_str(), cell(r.sps).c_str(), cell(r.hoa).c_str(), cell(r.hosps).c_str());
        out << line;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// verify-ordering

struct VerifyReport {
    OrderingReport quadrature;
    OrderingReport number;

    bool pass() const noexcept
    {
        return quadrature.all_pass() && number.all_pass();
    }
};

inline VerifyReport cmd_verify_ordering(int m_max, int r_max)
{
    if (m_max < 1 || m_max > kMaxVerifyQuadrature) {
        throw UsageError("verify-ordering: m_max must lie in [1, " + std::to_string(kMaxVerifyQuadrature) + "]");
    }
    if (r_max < 1 || r_max > kMaxVerifyNumber) {
        throw UsageError("verify-ordering: r_max must lie in [1, " + std::to_string(kMaxVerifyNumber) + "]");
    }
    return VerifyReport{verify_theorem1(m_max), verify_number_power(r_max)};
}

inline std::string render_verify(const VerifyReport &rep, bool json)
{
    std::ostringstream out;
    auto emit = [&](const char *kind, const OrderingReport &r) {
        for (const auto &c : r.checks) {
            if (json) {
                out << "{\"expansion\":\"" << kind << "\",\"order\":" << c.order << ",\"terms\":" << c.oracle_terms
                    << ",\"mismatches\":" << c.mismatched_terms << ",\"pass\":" << (c.pass ? "true" : "false")
                    << "}\n";
            } else {
                out << kind << "," << c.order << "," << c.oracle_terms << "," << c.mismatched_terms << ","
                    << (c.pass ? "pass" : "FAIL") << "\n";
            }
        }
    };
    if (!json) {
        out << "expansion,order,terms,mismatches,status\n";
    }
    emit("quadrature_power", rep.quadrature);
    emit("number_power", rep.number);
    if (!json) {
        out << (rep.pass() ? "all orderings verified\n" : "ordering verification FAILED\n");
    }
    return out.str();
}

} // namespace hon::cli

#endif
