#pragma once

#include "pairelicit/assign.hpp"
#include "pairelicit/train.hpp"

namespace pairelicit {

// Number of worker threads for the sweep engines: `requested` if nonzero,
// else the PAIRELICIT_THREADS environment variable, else hardware concurrency.
unsigned resolve_threads(unsigned requested);

// --- Monte Carlo sweep of the second-stage assignment rule ---
//
// For each grid cell (theta, m') and each trial: draw m' labeled pairs from
// the mixture, compute the empirical Q of the threshold rule at theta, apply
// the assignment rule, and compare against the closed-form risk-minimizing
// sign. Rows come back sorted by (theta, m'). Each trial has its own
// generator derived from seed XOR a global trial index, so results do not
// depend on the thread count.

struct AssignmentSweepConfig {
    GaussianMixtureSpec spec;
    std::vector<double> thetas;
    std::vector<std::size_t> m_primes;
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct AssignmentSweepRow {
    double theta;
    std::size_t m_prime;
    std::size_t trials;
    std::size_t failures;
    double empirical_rate;
    double lemma5_bound;
};

std::vector<AssignmentSweepRow> run_assignment_sweep(const AssignmentSweepConfig& config);

// CSV with header "theta,m_prime,trials,failures,empirical_rate,lemma5_bound".
std::string assignment_sweep_csv(const std::vector<AssignmentSweepRow>& rows);

// --- clustering error of each training method across class priors ---
//
// For each (prior, method) cell and each trial: draw a source pool, couple m
// training pairs from it (supervised instead gets m labeled points), train
// with the shared hyperparameters, and measure clustering error on a fresh
// labeled evaluation set. SD cells at a balanced prior are recorded as
// infeasible and rendered as NA.

struct PriorSweepConfig {
    GaussianMixtureSpec shape;  // prior_pos is replaced by each grid value
    std::vector<double> priors;
    std::vector<ObjectiveKind> methods;
    std::size_t m = 10000;
    std::size_t pool = 0;  // source points to couple pairs from; 0 means 2m
    std::size_t eval_n = 10000;
    std::size_t trials = 10;
    LossKind loss = LossKind::logistic;
    double learning_rate = 1e-2;
    std::size_t batch_size = 64;
    std::size_t epochs = 500;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct PriorSweepRow {
    double prior;
    std::string method;
    std::size_t m;
    double mean_clustering_error;  // NaN when infeasible
    double std_error;              // sample std over trials / sqrt(trials)
    bool feasible;
};

std::vector<PriorSweepRow> run_prior_sweep(const PriorSweepConfig& config);

// CSV with header "prior,method,m,mean_clustering_error,std_error";
// infeasible cells print NA in both value columns.
std::string prior_sweep_csv(const std::vector<PriorSweepRow>& rows);

const char* method_name(ObjectiveKind kind);
ObjectiveKind method_from_name(const std::string& name);

}  // namespace pairelicit
