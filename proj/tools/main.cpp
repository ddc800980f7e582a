#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pairelicit/common.hpp"
#include "pairelicit/sweep.hpp"

namespace {

using namespace pairelicit;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("short write to '" + path + "'");
}

void add_mixture_flags(CLI::App* cmd, GaussianMixtureSpec& spec) {
    cmd->add_option("--mu-pos", spec.mu_pos, "positive-class mean");
    cmd->add_option("--sigma-pos", spec.sigma_pos, "positive-class stddev")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mu-neg", spec.mu_neg, "negative-class mean");
    cmd->add_option("--sigma-neg", spec.sigma_neg, "negative-class stddev")
        ->check(CLI::PositiveNumber);
}

const CLI::Validator kOpenUnitInterval =
    CLI::Validator(
        [](std::string& s) {
            double v = std::stod(s);
            return (v > 0.0 && v < 1.0) ? std::string{} : std::string("must lie strictly in (0, 1)");
        },
        "FLOAT in (0,1)");

const CLI::Validator kHalfOpenUnitInterval =
    CLI::Validator(
        [](std::string& s) {
            double v = std::stod(s);
            return (v > 0.0 && v <= 1.0) ? std::string{} : std::string("must lie in (0, 1]");
        },
        "FLOAT in (0,1]");

int run(int argc, char** argv) {
    CLI::App app{"two-stage binary classification from similar/dissimilar pairs"};
    app.require_subcommand(1);

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "draw a labeled 1-D Gaussian mixture sample");
    GaussianMixtureSpec synth_spec;
    std::size_t synth_n = 1000;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    add_mixture_flags(synth, synth_spec);
    synth->add_option("--prior", synth_spec.prior_pos, "P(y = +1)")->check(kOpenUnitInterval);
    synth->add_option("--n", synth_n, "number of samples")->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output file (LIBSVM text)")->required();
    synth->callback([&] {
        write_file(synth_out, serialize_libsvm(sample_gaussian(synth_spec, synth_n, synth_seed)));
    });

    // --- pairs ---
    auto* pairs_cmd = app.add_subcommand("pairs", "couple labeled data into tau-labeled pairs");
    std::string pairs_data, pairs_out;
    std::size_t pairs_m = 1000;
    std::uint64_t pairs_seed = 0;
    pairs_cmd->add_option("--data", pairs_data, "labeled input (LIBSVM text)")->required();
    pairs_cmd->add_option("--m", pairs_m, "number of pairs")->check(CLI::PositiveNumber);
    pairs_cmd->add_option("--seed", pairs_seed, "generator seed");
    pairs_cmd->add_option("--out", pairs_out, "output file (pair CSV)")->required();
    pairs_cmd->callback([&] {
        Dataset data = parse_libsvm(read_file(pairs_data));
        write_file(pairs_out, serialize_pairs_csv(make_pairs(data, pairs_m, pairs_seed)));
    });

    // --- split ---
    auto* split = app.add_subcommand("split", "random disjoint split of a pair file");
    std::string split_in, split_out1, split_out2;
    double split_ratio = 0.9;
    std::uint64_t split_seed = 0;
    split->add_option("--pairs", split_in, "input pair CSV")->required();
    split->add_option("--ratio", split_ratio, "fraction for the first output")
        ->check(kHalfOpenUnitInterval);
    split->add_option("--seed", split_seed, "generator seed");
    split->add_option("--out1", split_out1, "first-stage output")->required();
    split->add_option("--out2", split_out2, "second-stage output")->required();
    split->callback([&] {
        PairDataset pairs = parse_pairs_csv(read_file(split_in));
        auto [d1, d2] = split_pairs(pairs, split_ratio, split_seed);
        write_file(split_out1, serialize_pairs_csv(d1));
        write_file(split_out2, serialize_pairs_csv(d2));
    });

    // --- train ---
    auto* train = app.add_subcommand("train", "fit a linear model");
    std::string train_pairs, train_data, train_objective = "cips", train_loss = "logistic";
    std::string train_out, train_trace;
    TrainConfig train_config;
    bool closed_form = false;
    train->add_option("--pairs", train_pairs, "pair CSV (cips/sd/mcl)");
    train->add_option("--data", train_data, "labeled LIBSVM text (supervised)");
    train->add_option("--objective", train_objective, "cips|sd|mcl|supervised");
    train->add_option("--loss", train_loss, "logistic|hinge|squared|unhinged|linear");
    train->add_option("--prior", train_config.objective.prior_pos, "class prior (sd only)")
        ->check(kOpenUnitInterval);
    train->add_option("--lr", train_config.learning_rate, "learning rate")
        ->check(CLI::PositiveNumber);
    train->add_option("--batch", train_config.batch_size, "minibatch size")
        ->check(CLI::PositiveNumber);
    train->add_option("--epochs", train_config.epochs, "training epochs");
    train->add_option("--l2", train_config.l2, "l2 penalty weight")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--seed", train_config.seed, "generator seed");
    train->add_flag("--closed-form", closed_form,
                    "use the spectral closed form (cips with unhinged loss only)");
    train->add_option("--out", train_out, "output model file")->required();
    train->add_option("--trace", train_trace, "optional loss-trace CSV");
    train->callback([&] {
        train_config.objective.kind = method_from_name(train_objective);
        train_config.objective.loss = loss_from_name(train_loss);
        const bool wants_points = train_config.objective.kind == ObjectiveKind::supervised;
        if (wants_points && train_data.empty())
            throw CLI::ValidationError("train", "supervised training requires --data");
        if (!wants_points && train_pairs.empty())
            throw CLI::ValidationError("train", "pair objectives require --pairs");
        if (closed_form && (train_config.objective.kind != ObjectiveKind::cips ||
                            train_config.objective.loss != LossKind::unhinged))
            throw CLI::ValidationError("train",
                                       "--closed-form applies to --objective cips --loss unhinged");

        TrainResult result;
        if (closed_form) {
            PairDataset pairs = parse_pairs_csv(read_file(train_pairs));
            result.model = train_unhinged_closed_form(pairs);
            result.trace.push_back(pairwise_surrogate_risk(result.model, pairs, LossKind::unhinged));
        } else if (wants_points) {
            result = train_sgd(parse_libsvm(read_file(train_data)), train_config);
        } else {
            result = train_sgd(parse_pairs_csv(read_file(train_pairs)), train_config);
        }
        write_file(train_out, serialize_model(result.model));
        if (!train_trace.empty()) {
            std::string csv = "epoch,objective_value\n";
            for (std::size_t e = 0; e < result.trace.size(); ++e)
                csv += std::to_string(e) + "," + format_double(result.trace[e]) + "\n";
            write_file(train_trace, csv);
        }
    });

    // --- assign ---
    auto* assign = app.add_subcommand("assign", "pick the class assignment from held-out pairs");
    std::string assign_model, assign_pairs, assign_out;
    double assign_prior = 0.1;
    assign->add_option("--model", assign_model, "model file from train")->required();
    assign->add_option("--pairs", assign_pairs, "second-stage pair CSV")->required();
    assign->add_option("--prior", assign_prior, "class prior")->check(kOpenUnitInterval)->required();
    assign->add_option("--out", assign_out, "output signed-classifier file")->required();
    assign->callback([&] {
        LinearModel model = parse_model(read_file(assign_model));
        PairDataset pairs =
            parse_pairs_csv(read_file(assign_pairs), static_cast<std::uint32_t>(model.dim()));
        ClassPrior prior(assign_prior);
        int s = assign_sign(prior, q_statistic(model, pairs));
        write_file(assign_out, serialize_signed(SignedClassifier{std::move(model), s}));
    });

    // --- eval ---
    auto* eval = app.add_subcommand("eval", "pointwise/clustering/pairwise errors on labeled data");
    std::string eval_model, eval_data, eval_out;
    eval->add_option("--model", eval_model, "signed-classifier file")->required();
    eval->add_option("--data", eval_data, "labeled LIBSVM text")->required();
    eval->add_option("--out", eval_out, "output CSV (default stdout)");
    eval->callback([&] {
        SignedClassifier clf = parse_signed(read_file(eval_model));
        Dataset data =
            parse_libsvm(read_file(eval_data), static_cast<std::uint32_t>(clf.model.dim()));
        RiskReport report = make_risk_report(clf, data);
        std::string csv = "pointwise_error,clustering_error,pairwise_error\n" +
                          format_double(report.pointwise) + "," + format_double(report.clustering) +
                          "," + format_double(report.pairwise) + "\n";
        if (eval_out.empty())
            std::cout << csv;
        else
            write_file(eval_out, csv);
    });

    // --- sweep-assignment ---
    auto* sweep_a = app.add_subcommand("sweep-assignment",
                                       "Monte Carlo failure rate of the assignment rule");
    AssignmentSweepConfig sa;
    sa.thetas = {-3, -2, -1, 0, 1, 2, 3};
    sa.m_primes = {2, 8, 32, 128, 512};
    std::string sweep_a_out;
    add_mixture_flags(sweep_a, sa.spec);
    sweep_a->add_option("--prior", sa.spec.prior_pos, "P(y = +1)")->check(kOpenUnitInterval);
    sweep_a->add_option("--thetas", sa.thetas, "threshold grid")->delimiter(',');
    sweep_a->add_option("--mprimes", sa.m_primes, "pair-count grid")->delimiter(',');
    sweep_a->add_option("--trials", sa.trials, "trials per cell")->check(CLI::PositiveNumber);
    sweep_a->add_option("--seed", sa.seed, "generator seed");
    sweep_a->add_option("--threads", sa.threads, "worker threads (default PAIRELICIT_THREADS)");
    sweep_a->add_option("--out", sweep_a_out, "output CSV")->required();
    sweep_a->callback([&] { write_file(sweep_a_out, assignment_sweep_csv(run_assignment_sweep(sa))); });

    // --- sweep-prior ---
    auto* sweep_p = app.add_subcommand("sweep-prior",
                                       "clustering error of each method across class priors");
    PriorSweepConfig sp;
    sp.priors = {1.0 / 7, 2.0 / 7, 3.0 / 7, 4.0 / 7, 5.0 / 7, 6.0 / 7};
    std::vector<std::string> sp_methods = {"cips", "sd", "supervised"};
    std::string sp_loss = "logistic", sweep_p_out;
    add_mixture_flags(sweep_p, sp.shape);
    sweep_p->add_option("--priors", sp.priors, "class-prior grid")->delimiter(',');
    sweep_p->add_option("--methods", sp_methods, "subset of cips,sd,mcl,supervised")->delimiter(',');
    sweep_p->add_option("--m", sp.m, "training pairs (or labeled points)")
        ->check(CLI::PositiveNumber);
    sweep_p->add_option("--pool", sp.pool, "source points coupled into pairs (default 2m)");
    sweep_p->add_option("--eval-n", sp.eval_n, "evaluation points")->check(CLI::PositiveNumber);
    sweep_p->add_option("--trials", sp.trials, "seeded trials per cell")->check(CLI::PositiveNumber);
    sweep_p->add_option("--loss", sp_loss, "surrogate loss for every method");
    sweep_p->add_option("--lr", sp.learning_rate, "learning rate")->check(CLI::PositiveNumber);
    sweep_p->add_option("--batch", sp.batch_size, "minibatch size")->check(CLI::PositiveNumber);
    sweep_p->add_option("--epochs", sp.epochs, "training epochs");
    sweep_p->add_option("--l2", sp.l2, "l2 penalty weight")->check(CLI::NonNegativeNumber);
    sweep_p->add_option("--seed", sp.seed, "generator seed");
    sweep_p->add_option("--threads", sp.threads, "worker threads (default PAIRELICIT_THREADS)");
    sweep_p->add_option("--out", sweep_p_out, "output CSV")->required();
    sweep_p->callback([&] {
        sp.loss = loss_from_name(sp_loss);
        sp.methods.clear();
        for (const auto& name : sp_methods) sp.methods.push_back(method_from_name(name));
        write_file(sweep_p_out, prior_sweep_csv(run_prior_sweep(sp)));
    });

    // --- bound ---
    auto* bound = app.add_subcommand("bound", "assignment error bound for given prior, m2, r");
    double bound_prior = 0.1, bound_r = 0.0;
    std::size_t bound_m2 = 0;
    bound->add_option("--prior", bound_prior, "class prior")->check(kOpenUnitInterval)->required();
    bound->add_option("--m2", bound_m2, "second-stage pair count")->required();
    bound->add_option("--rpoint", bound_r, "pointwise risk of sign(f)")
        ->check(CLI::Range(0.0, 1.0))
        ->required();
    bound->callback([&] {
        std::cout << format_double(assignment_error_bound(ClassPrior(bound_prior), bound_m2, bound_r))
                  << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pairelicit::BalancedPriorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const pairelicit::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pairelicit::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
