#include "pairelicit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "pairelicit/common.hpp"
#include "pairelicit/rng.hpp"

namespace pairelicit {

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PAIRELICIT_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace {

// Runs fn(cell) for every cell index on a small worker pool. Work items are
// independent; output slots are preallocated by the caller.
template <typename Fn>
void parallel_cells(std::size_t cells, unsigned threads, Fn&& fn) {
    std::size_t limit = std::max<std::size_t>(cells, 1);
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), limit));
    if (threads <= 1) {
        for (std::size_t c = 0; c < cells; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t c = next.fetch_add(1); c < cells; c = next.fetch_add(1)) fn(c);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<AssignmentSweepRow> run_assignment_sweep(const AssignmentSweepConfig& config) {
    if (config.thetas.empty() || config.m_primes.empty())
        throw std::invalid_argument("run_assignment_sweep: grids must be nonempty");
    if (config.trials == 0) throw std::invalid_argument("run_assignment_sweep: trials must be >= 1");
    ClassPrior prior(config.spec.prior_pos);

    auto thetas = config.thetas;
    auto m_primes = config.m_primes;
    std::sort(thetas.begin(), thetas.end());
    std::sort(m_primes.begin(), m_primes.end());

    const std::size_t cells = thetas.size() * m_primes.size();
    std::vector<AssignmentSweepRow> rows(cells);

    parallel_cells(cells, resolve_threads(config.threads), [&](std::size_t c) {
        const double theta = thetas[c / m_primes.size()];
        const std::size_t m_prime = m_primes[c % m_primes.size()];
        const double r_point = threshold_pointwise_error(theta, config.spec);
        const int s_star = sign_pm(1.0 - 2.0 * r_point);
        const int prior_sign = sign_pm(2.0 * config.spec.prior_pos - 1.0);

        std::size_t failures = 0;
        for (std::size_t t = 0; t < config.trials; ++t) {
            Rng rng = Rng::derive(config.seed, c * config.trials + t);
            std::size_t mismatches = 0;
            for (std::size_t k = 0; k < m_prime; ++k) {
                int y = rng.bernoulli(config.spec.prior_pos) ? 1 : -1;
                double x = y > 0 ? rng.normal(config.spec.mu_pos, config.spec.sigma_pos)
                                 : rng.normal(config.spec.mu_neg, config.spec.sigma_neg);
                int yp = rng.bernoulli(config.spec.prior_pos) ? 1 : -1;
                double xp = yp > 0 ? rng.normal(config.spec.mu_pos, config.spec.sigma_pos)
                                   : rng.normal(config.spec.mu_neg, config.spec.sigma_neg);
                int tau = y * yp;
                mismatches += (x >= theta ? 1 : -1) != tau;
                mismatches += (xp >= theta ? 1 : -1) != tau;
            }
            // q_hat = mismatches / (2 m'), so 1 - 2 q_hat has the sign of
            // m' - mismatches; compare through the exact integers.
            double one_minus_2q = static_cast<double>(m_prime) - static_cast<double>(mismatches);
            int s_hat = prior_sign * sign_pm(one_minus_2q);
            failures += s_hat != s_star;
        }
        rows[c] = {theta,
                   m_prime,
                   config.trials,
                   failures,
                   static_cast<double>(failures) / static_cast<double>(config.trials),
                   assignment_error_bound(prior, m_prime, r_point)};
    });
    return rows;
}

std::string assignment_sweep_csv(const std::vector<AssignmentSweepRow>& rows) {
    std::string out = "theta,m_prime,trials,failures,empirical_rate,lemma5_bound\n";
    for (const auto& r : rows) {
        out += format_double(r.theta) + "," + std::to_string(r.m_prime) + "," +
               std::to_string(r.trials) + "," + std::to_string(r.failures) + "," +
               format_double(r.empirical_rate) + "," + format_double(r.lemma5_bound) + "\n";
    }
    return out;
}

namespace {

double trial_clustering_error(ObjectiveKind method, double prior_value,
                              const PriorSweepConfig& config, std::uint64_t trial_seed) {
    GaussianMixtureSpec spec = config.shape;
    spec.prior_pos = prior_value;

    Rng seeder(trial_seed);
    std::uint64_t s_data = seeder.next_u64();
    std::uint64_t s_pair = seeder.next_u64();
    std::uint64_t s_train = seeder.next_u64();
    std::uint64_t s_eval = seeder.next_u64();

    TrainConfig tc;
    tc.objective = {method, config.loss, prior_value};
    tc.learning_rate = config.learning_rate;
    tc.batch_size = config.batch_size;
    tc.epochs = config.epochs;
    tc.l2 = config.l2;
    tc.seed = s_train;

    LinearModel model;
    if (method == ObjectiveKind::supervised) {
        Dataset train_data = sample_gaussian(spec, config.m, s_data);
        model = train_sgd(train_data, tc).model;
    } else {
        std::size_t pool = config.pool > 0 ? config.pool : 2 * config.m;
        Dataset source = sample_gaussian(spec, pool, s_data);
        PairDataset pairs = make_pairs(source, config.m, s_pair);
        model = train_sgd(pairs, tc).model;
    }

    Dataset eval = sample_gaussian(spec, config.eval_n, s_eval);
    return clustering_error(SignedClassifier{model, 1}, eval);
}

}  // namespace

std::vector<PriorSweepRow> run_prior_sweep(const PriorSweepConfig& config) {
    if (config.priors.empty() || config.methods.empty())
        throw std::invalid_argument("run_prior_sweep: grids must be nonempty");
    if (config.trials == 0) throw std::invalid_argument("run_prior_sweep: trials must be >= 1");
    for (double p : config.priors) ClassPrior check(p);

    auto priors = config.priors;
    std::sort(priors.begin(), priors.end());
    auto methods = config.methods;
    std::sort(methods.begin(), methods.end(),
              [](ObjectiveKind a, ObjectiveKind b) {
                  return std::string(method_name(a)) < method_name(b);
              });

    const std::size_t cells = priors.size() * methods.size();
    std::vector<PriorSweepRow> rows(cells);

    parallel_cells(cells, resolve_threads(config.threads), [&](std::size_t c) {
        const double prior_value = priors[c / methods.size()];
        const ObjectiveKind method = methods[c % methods.size()];
        PriorSweepRow row{prior_value, method_name(method), config.m, 0.0, 0.0, true};

        if (method == ObjectiveKind::sd && prior_value == 0.5) {
            row.feasible = false;
            row.mean_clustering_error = row.std_error = std::nan("");
            rows[c] = row;
            return;
        }

        std::vector<double> errors(config.trials);
        for (std::size_t t = 0; t < config.trials; ++t)
            errors[t] =
                trial_clustering_error(method, prior_value, config,
                                       config.seed ^ (c * config.trials + t));

        KahanSum mean_acc;
        for (double e : errors) mean_acc.add(e);
        double mean = mean_acc.value() / static_cast<double>(config.trials);
        double var = 0.0;
        if (config.trials > 1) {
            KahanSum sq;
            for (double e : errors) sq.add((e - mean) * (e - mean));
            var = sq.value() / static_cast<double>(config.trials - 1);
        }
        row.mean_clustering_error = mean;
        row.std_error = std::sqrt(var / static_cast<double>(config.trials));
        rows[c] = row;
    });
    return rows;
}

std::string prior_sweep_csv(const std::vector<PriorSweepRow>& rows) {
    std::string out = "prior,method,m,mean_clustering_error,std_error\n";
    for (const auto& r : rows) {
        out += format_double(r.prior) + "," + r.method + "," + std::to_string(r.m) + ",";
        if (r.feasible)
            out += format_double(r.mean_clustering_error) + "," + format_double(r.std_error);
        else
            out += "NA,NA";
        out += "\n";
    }
    return out;
}

const char* method_name(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::cips: return "cips";
        case ObjectiveKind::sd: return "sd";
        case ObjectiveKind::mcl: return "mcl";
        case ObjectiveKind::supervised: return "supervised";
    }
    return "?";
}

ObjectiveKind method_from_name(const std::string& name) {
    if (name == "cips") return ObjectiveKind::cips;
    if (name == "sd") return ObjectiveKind::sd;
    if (name == "mcl") return ObjectiveKind::mcl;
    if (name == "supervised") return ObjectiveKind::supervised;
    throw std::invalid_argument("unknown objective '" + name + "'");
}

}  // namespace pairelicit
