// Command-line front end for the grade swap marketplace library.
//
// Exit codes: 0 on success, 1 when an input is understood but refused by a
// domain rule, 2 when a file or argument cannot be read at all.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradeswap/gradeswap.hpp"

namespace gs = gradeswap;
namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gs::parse_error("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw gs::parse_error("cannot open " + path + " for writing");
    return out;
}

std::string format_number(double v) { return gs::json(v).dump(); }

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        auto out = open_output(out_path);
        out << text;
    }
}

struct AllocateArgs {
    std::string scores_path;
    std::string quota_text;
    std::string out_path;
    bool as_json = false;
};

void run_allocate(const AllocateArgs& args) {
    auto in = open_input(args.scores_path);
    const auto sheet = gs::ScoreSheet::from_csv(in);
    const auto quota = gs::parse_quota(args.quota_text);
    const auto grades = gs::allocate_curve(sheet, quota);
    if (args.as_json) {
        gs::json j = gs::json::object();
        for (const auto& [student, grade] : grades) j[student] = gs::to_string(grade);
        emit(j.dump(2) + "\n", args.out_path);
        return;
    }
    std::string text = "student_id,grade\n";
    for (const auto& [student, grade] : grades)
        text += student + ',' + std::string(gs::to_string(grade)) + '\n';
    emit(text, args.out_path);
}

struct WeightsArgs {
    std::optional<double> volatility;
    std::string scores_path;
    bool as_json = false;
};

void run_weights(const WeightsArgs& args) {
    double x = 0.0;
    if (args.volatility) {
        x = *args.volatility;
    } else if (!args.scores_path.empty()) {
        auto in = open_input(args.scores_path);
        x = gs::volatility(gs::ScoreSheet::from_csv(in));
    } else {
        throw gs::parse_error("weights: pass --volatility or --scores");
    }
    const auto scheme = gs::WeightScheme::from_volatility(x);
    if (args.as_json) {
        gs::json j;
        j["volatility"] = scheme.score_volatility;
        j["midterm"] = scheme.midterm;
        j["final"] = scheme.final_exam;
        j["fixed"] = scheme.fixed;
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << "volatility=" << format_number(scheme.score_volatility) << "\n"
              << "midterm=" << format_number(scheme.midterm) << "\n"
              << "final=" << format_number(scheme.final_exam) << "\n"
              << "fixed=" << format_number(scheme.fixed) << "\n";
}

struct NpvArgs {
    gs::TradeEconomics econ;
    gs::TimeValueParams params;
    bool as_json = false;
};

void run_npv(const NpvArgs& args) {
    const auto value = gs::trade_npv(args.econ, args.params);
    if (args.as_json) {
        gs::json j;
        j["seller"] = value.seller;
        j["buyer"] = value.buyer;
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << "seller=" << format_number(value.seller) << "\n"
              << "buyer=" << format_number(value.buyer) << "\n";
}

struct BookArgs {
    std::string orders_path;
    std::string gradebook_path;
    std::string licenses_path;
    std::string policy = "midpoint";
    std::string out_path;
};

gs::Order order_from_json(const gs::json& j) {
    gs::Order o;
    o.side = gs::side_from_string(j.at("side").get<std::string>());
    o.student = j.at("student").get<std::string>();
    o.course = j.at("course").get<std::string>();
    o.current_grade = gs::grade_from_string(j.at("current_grade").get<std::string>());
    if (o.side == gs::Side::Bid) {
        o.min_acceptable_grade = gs::grade_from_string(j.at("min_acceptable_grade").get<std::string>());
        o.max_fee = j.at("max_fee").get<double>();
        o.notional = j.at("notional").get<double>();
    } else {
        o.min_fee = j.at("min_fee").get<double>();
    }
    return o;
}

void run_book(const BookArgs& args) {
    auto in = open_input(args.orders_path);
    std::vector<gs::Order> orders;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (gs::detail::trim(line).empty()) continue;
        try {
            orders.push_back(order_from_json(gs::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw gs::parse_error("orders: line " + std::to_string(lineno) + ": " + e.what());
        }
    }

    gs::Gradebook gradebook;
    if (!args.gradebook_path.empty()) {
        auto gb = open_input(args.gradebook_path);
        gradebook = gs::Gradebook::from_csv(gb);
    } else {
        // Without a registrar file the first attested grade per record wins,
        // so conflicting claims surface as refusals.
        for (const auto& o : orders)
            if (!gradebook.has(o.student, o.course)) gradebook.set(o.student, o.course, o.current_grade);
    }

    gs::LicenseSet licenses;
    if (!args.licenses_path.empty()) {
        auto lf = open_input(args.licenses_path);
        std::string row;
        if (!std::getline(lf, row) || gs::detail::trim(row) != "holder,role,evidence")
            throw gs::parse_error("licenses: expected header 'holder,role,evidence'");
        std::size_t n = 1;
        while (std::getline(lf, row)) {
            ++n;
            auto text = gs::detail::trim(row);
            if (text.empty()) continue;
            auto cells = gs::detail::split(text, ',');
            if (cells.size() != 3)
                throw gs::parse_error("licenses: line " + std::to_string(n) + ": expected 3 cells");
            licenses.issue(std::string(gs::detail::trim(cells[0])),
                           gs::role_from_string(gs::detail::trim(cells[1])),
                           std::string(gs::detail::trim(cells[2])), 0.0);
        }
    } else {
        for (const auto& o : orders)
            licenses.issue(o.student, o.side == gs::Side::Bid ? gs::Role::Buyer : gs::Role::Seller,
                           "cli:implicit", 0.0);
    }

    gs::OrderBook book(gs::fee_policy_from_string(args.policy));
    gs::json refusals = gs::json::array();
    for (const auto& o : orders) {
        auto placed = book.submit(o, licenses, gradebook);
        if (!placed) {
            gs::json r;
            r["side"] = gs::to_string(o.side);
            r["student"] = o.student;
            r["course"] = o.course;
            r["reason"] = gs::to_string(placed.refusal());
            r["detail"] = placed.detail();
            refusals.push_back(std::move(r));
        }
    }
    gs::json proposals = gs::json::array();
    for (const auto& m : book.match()) proposals.push_back(m.to_json());

    gs::json out;
    out["proposals"] = std::move(proposals);
    out["refusals"] = std::move(refusals);
    out["snapshot"] = book.snapshot();
    emit(out.dump(2) + "\n", args.out_path);
}

struct SimulateArgs {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

void run_simulate(const SimulateArgs& args) {
    auto in = open_input(args.scenario_path);
    gs::Scenario scenario = gs::parse_scenario(in);
    if (args.seed) {
        scenario.seed = *args.seed;
    }

    fs::path dir = args.out_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("GRADESWAP_OUT")) dir = env;
        else dir = ".";
    }
    fs::create_directories(dir);

    auto output = gs::run_scenario(scenario);

    const fs::path report_path = dir / "report.json";
    open_output(report_path.string()) << output.report.dump(2) << "\n";
    const fs::path ledger_path = dir / "ledger.jsonl";
    {
        auto out = open_output(ledger_path.string());
        output.engine.ledger().save(out);
    }
    for (const auto& [name, content] : output.semester_csvs)
        open_output((dir / name).string()) << content;

    std::cout << "report: " << report_path.string() << "\n"
              << "ledger: " << ledger_path.string() << " (" << output.engine.ledger().size()
              << " events, digest " << output.engine.ledger().last_digest() << ")\n"
              << "semester files: " << output.semester_csvs.size() << "\n";
}

struct VerifyArgs {
    std::string ledger_path;
};

int run_verify(const VerifyArgs& args) {
    auto in = open_input(args.ledger_path);
    const auto ledger = gs::Ledger::load(in);
    if (auto bad = ledger.verify()) {
        std::cout << "tampered at sequence " << *bad << "\n";
        return 1;
    }
    std::cout << "ok (" << ledger.size() << " events, digest " << ledger.last_digest() << ")\n";
    return 0;
}

struct CurvesArgs {
    gs::TimeValueParams params;
    double grade0 = 100.0;
    double friendship0 = 100.0;
    double money0 = 100.0;
    double horizon = 5.0;
    int steps = 101;
    std::string out_path;
};

void run_curves(const CurvesArgs& args) {
    const auto points = gs::emit_curves(args.params, args.grade0, args.friendship0, args.money0,
                                        args.horizon, args.steps);
    std::ostringstream text;
    gs::write_curves_csv(text, points);
    emit(text.str(), args.out_path);
}

void add_rate_options(CLI::App* cmd, gs::TimeValueParams& params) {
    cmd->add_option("--grade-decay", params.grade_decay, "grade value decay rate per year");
    cmd->add_option("--friendship-growth", params.friendship_growth, "friendship growth rate per year");
    cmd->add_option("--money-growth", params.money_growth, "invested money growth rate per year");
    cmd->add_option("--discount-rate", params.discount_rate, "discount rate per year");
    cmd->add_option("--utilization", params.utilization, "enjoyed share of a held grade's value");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grade swap marketplace tools"};
    app.require_subcommand(1);

    AllocateArgs allocate_args;
    auto* allocate = app.add_subcommand("allocate", "curve a score sheet onto a grade quota");
    allocate->add_option("--scores", allocate_args.scores_path, "csv with student_id,score")->required();
    allocate->add_option("--quota", allocate_args.quota_text, "quota like A:0.2,B:0.3,C:0.3,F:0.2")->required();
    allocate->add_option("--out", allocate_args.out_path, "output file (default stdout)");
    allocate->add_flag("--json", allocate_args.as_json, "emit json instead of csv");
    allocate->callback([&] { run_allocate(allocate_args); });

    WeightsArgs weights_args;
    double weights_vol = 0.0;
    auto* weights = app.add_subcommand("weights", "exam weights for a cohort volatility");
    auto* vol_opt = weights->add_option("--volatility", weights_vol, "score volatility");
    weights->add_option("--scores", weights_args.scores_path, "csv with student_id,score");
    weights->add_flag("--json", weights_args.as_json, "emit json");
    weights->callback([&] {
        if (vol_opt->count()) weights_args.volatility = weights_vol;
        run_weights(weights_args);
    });

    NpvArgs npv_args;
    auto* npv = app.add_subcommand("npv", "net present value of a swap for both sides");
    npv->add_option("--fee", npv_args.econ.initial_fee, "fee paid at inception")->required();
    npv->add_option("--notional", npv_args.econ.notional, "protected scholarship amount")->required();
    npv->add_option("--grade-value", npv_args.econ.initial_grade_value, "grade value at inception");
    npv->add_option("--friendship-value", npv_args.econ.initial_friendship_value,
                    "friendship value at inception");
    npv->add_option("--years", npv_args.econ.holding_years, "holding period in years")->required();
    add_rate_options(npv, npv_args.params);
    npv->add_flag("--json", npv_args.as_json, "emit json");
    npv->callback([&] { run_npv(npv_args); });

    BookArgs book_args;
    auto* book = app.add_subcommand("book", "match a stream of orders");
    book->add_option("--orders", book_args.orders_path, "json-lines order file")->required();
    book->add_option("--gradebook", book_args.gradebook_path, "csv with student_id,course_id,grade");
    book->add_option("--licenses", book_args.licenses_path, "csv with holder,role,evidence");
    book->add_option("--policy", book_args.policy, "fee policy: midpoint or at-ask");
    book->add_option("--out", book_args.out_path, "output file (default stdout)");
    book->callback([&] { run_book(book_args); });

    SimulateArgs sim_args;
    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "run a scenario end to end");
    simulate->add_option("--scenario", sim_args.scenario_path, "scenario config file")->required();
    auto* seed_opt = simulate->add_option("--seed", sim_seed, "override the scenario seed");
    simulate->add_option("--out", sim_args.out_dir,
                         "output directory (default $GRADESWAP_OUT, then the working directory)");
    simulate->callback([&] {
        if (seed_opt->count()) sim_args.seed = sim_seed;
        run_simulate(sim_args);
    });

    VerifyArgs verify_args;
    int verify_exit = 0;
    auto* verify = app.add_subcommand("verify-ledger", "check a ledger's digest chain");
    verify->add_option("--ledger", verify_args.ledger_path, "json-lines ledger file")->required();
    verify->callback([&] { verify_exit = run_verify(verify_args); });

    CurvesArgs curves_args;
    auto* curves = app.add_subcommand("curves", "sample the grade, friendship and money curves");
    curves->add_option("--grade0", curves_args.grade0, "initial grade value");
    curves->add_option("--friendship0", curves_args.friendship0, "initial friendship value");
    curves->add_option("--money0", curves_args.money0, "initial invested amount");
    curves->add_option("--horizon", curves_args.horizon, "years to sample");
    curves->add_option("--steps", curves_args.steps, "number of samples");
    add_rate_options(curves, curves_args.params);
    curves->add_option("--out", curves_args.out_path, "output file (default stdout)");
    curves->callback([&] { run_curves(curves_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const gs::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return verify_exit;
}
