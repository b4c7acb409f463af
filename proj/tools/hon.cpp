// hon: higher-order nonclassicality criteria from the command line.
//
//   hon eval --state '{"family":"binomial","params":{"M":20,"p":0.5}}' --criterion hoa_d:3
//   hon sweep --state @bs.json --param p --range 0.01:0.99:99 --criterion hos_shm:4
//   hon threshold --state @bs.json --param p --criterion hos_shm --order 4 --range 0.5:0.99
//   hon table1
//   hon verify-ordering 12 10

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <hon/cli.hpp>

namespace
{

using namespace hon;
using namespace hon::cli;

struct CommonArgs {
    std::string state;
    std::vector<std::string> criteria;
    std::optional<int> order;
    std::optional<int> ladder;
    std::string param;
    std::string range;
    std::optional<double> tol;
    bool json = false;
    bool closed_form = false;
    std::string out;
};

std::string slurp(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

StateSpec load_state(const std::string &arg)
{
    if (arg.empty()) {
        throw UsageError("--state is required");
    }
    return parse_state_spec(arg.front() == '@' ? slurp(arg.substr(1)) : arg);
}

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    std::optional<int> points;
};

Range parse_range(const std::string &text)
{
    Range r;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) {
        parts.push_back(item);
    }
    if (parts.size() < 2 || parts.size() > 3) {
        throw UsageError("--range expects lo:hi or lo:hi:points");
    }
    try {
        r.lo = std::stod(parts[0]);
        r.hi = std::stod(parts[1]);
        if (parts.size() == 3) {
            r.points = std::stoi(parts[2]);
        }
    } catch (const std::exception &) {
        throw UsageError("--range: cannot parse \"" + text + "\"");
    }
    return r;
}

std::vector<CriterionRequest> requests(const CommonArgs &args)
{
    if (args.criteria.empty() || (args.criteria.size() == 1 && args.criteria[0] == "all")) {
        return default_criteria();
    }
    std::vector<CriterionRequest> out;
    for (const auto &c : args.criteria) {
        out.push_back(parse_criterion_request(c, args.order));
    }
    return out;
}

EvalOptions options(const CommonArgs &args)
{
    EvalOptions o;
    o.ladder = args.ladder;
    o.closed_form = args.closed_form;
    return o;
}

void emit(const CommonArgs &args, const std::string &text)
{
    if (args.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(args.out, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write " + args.out);
    }
    f << text;
}

void add_output_flags(CLI::App *cmd, CommonArgs &args)
{
    cmd->add_flag("--json", args.json, "Emit JSON lines instead of CSV");
    cmd->add_option("--out", args.out, "Write output to a file");
}

void add_criterion_flags(CLI::App *cmd, CommonArgs &args)
{
    cmd->add_option("--criterion", args.criteria, "name[:order[:m]] (repeatable) or 'all'");
    cmd->add_option("--order", args.order, "Order used when a criterion has none");
    cmd->add_option("--ladder", args.ladder, "Brandt-Greenberg k for hos_shm / hos_bg")->check(CLI::PositiveNumber);
    cmd->add_flag("--closed-form", args.closed_form, "Use binomial / NLVSS / NLESS closed forms");
}

int fail(const Error &e)
{
    std::string msg = e.what();
    for (auto &c : msg) {
        if (c == '\n') {
            c = ' ';
        }
    }
    std::fprintf(stderr, "error kind=%s exit=%d: %s\n", e.kind(), static_cast<int>(e.exit_code()), msg.c_str());
    return static_cast<int>(e.exit_code());
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Higher-order nonclassicality criteria for truncated bosonic states"};
    app.require_subcommand(1);

    CommonArgs args;
    int m_max = 0;
    int r_max = 0;

    auto *eval = app.add_subcommand("eval", "Evaluate criteria on one state");
    eval->add_option("--state", args.state, "State spec JSON or @file")->required();
    add_criterion_flags(eval, args);
    eval->add_option("--tol", args.tol, "Band |value| < tol reported as indeterminate");
    add_output_flags(eval, args);

    auto *sweep = app.add_subcommand("sweep", "Sweep one state parameter");
    sweep->add_option("--state", args.state, "State spec JSON or @file")->required();
    sweep->add_option("--param", args.param, "Parameter to vary")->required();
    sweep->add_option("--range", args.range, "lo:hi:points")->required();
    add_criterion_flags(sweep, args);
    add_output_flags(sweep, args);

    auto *threshold = app.add_subcommand("threshold", "Bisect for a criterion sign change");
    threshold->add_option("--state", args.state, "State spec JSON or @file")->required();
    threshold->add_option("--param", args.param, "Parameter to vary")->required();
    threshold->add_option("--range", args.range, "Bracket lo:hi")->required();
    add_criterion_flags(threshold, args);
    threshold->add_option("--tol", args.tol, "Bisection tolerance (default 1e-5)");
    add_output_flags(threshold, args);

    auto *table1 = app.add_subcommand("table1", "HOA vs HOSPS on two-level Fock mixtures");
    add_output_flags(table1, args);

    auto *verify = app.add_subcommand("verify-ordering", "Check normal-ordering expansions symbolically");
    verify->add_option("m_max", m_max, "Largest power of (a^dagger + a)")->required();
    verify->add_option("r_max", r_max, "Largest power of N")->required();
    add_output_flags(verify, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return fail(UsageError(e.what()));
    }

    try {
        if (*eval) {
            const StateSpec spec = load_state(args.state);
            EvalOptions opts = options(args);
            if (args.tol) {
                opts.indeterminate_tolerance = *args.tol;
            }
            const auto rows = cmd_eval(spec, requests(args), opts);
            emit(args, args.json ? render_eval_json(rows, opts.indeterminate_tolerance)
                                 : render_eval_csv(rows, opts.indeterminate_tolerance));
        } else if (*sweep) {
            const Range range = parse_range(args.range);
            SweepRequest req;
            req.base = load_state(args.state);
            req.param = args.param;
            req.lo = range.lo;
            req.hi = range.hi;
            if (!range.points) {
                throw UsageError("sweep: --range needs lo:hi:points");
            }
            req.points = *range.points;
            req.criteria = requests(args);
            req.options = options(args);
            const auto rows = cmd_sweep(req);
            emit(args, args.json ? render_sweep_json(rows) : render_sweep_csv(rows));
        } else if (*threshold) {
            const Range range = parse_range(args.range);
            ThresholdRequest req;
            req.base = load_state(args.state);
            req.param = args.param;
            req.lo = range.lo;
            req.hi = range.hi;
            const auto reqs = requests(args);
            if (args.criteria.size() != 1 || reqs.size() != 1) {
                throw UsageError("threshold: exactly one --criterion is required");
            }
            req.criterion = reqs.front();
            req.tolerance = args.tol.value_or(kDefaultThresholdTolerance);
            req.options = options(args);
            emit(args, render_threshold(cmd_threshold(req), args.json));
        } else if (*table1) {
            emit(args, render_table1(cmd_table1(), args.json));
        } else if (*verify) {
            const VerifyReport rep = cmd_verify_ordering(m_max, r_max);
            emit(args, render_verify(rep, args.json));
            if (!rep.pass()) {
                return fail(VerificationError("symbolic expansion disagrees with the closed-form coefficients"));
            }
        }
    } catch (const Error &e) {
        return fail(e);
    } catch (const std::exception &e) {
        return fail(DomainError(e.what()));
    }
    return 0;
}
