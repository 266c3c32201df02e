#include "pcrit/domains.hpp"

#include "pcrit/io.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pcrit {

namespace {

// Accumulates transitions and rewards before freezing them into an MDP.
class Builder {
public:
    Builder(std::size_t states, std::size_t actions)
        : states_(states), actions_(actions), probs_(states * actions * states, 0.0),
          rewards_(states * actions * states, 0.0), mask_(states * actions * states, 0) {}

    void set(std::size_t s, std::size_t a, std::size_t next, double p, double r) {
        const auto i = (s * actions_ + a) * states_ + next;
        probs_[i] = p;
        rewards_[i] = r;
        mask_[i] = 1;
    }

    Domain finish(std::string name, double discount, numvec initial, double tolerance = 1e-12) {
        Domain d;
        d.name = std::move(name);
        d.mdp = TabularMdp(states_, actions_, rewards_, discount, std::move(initial), mask_);
        d.truth = TransitionModel(states_, actions_, probs_);
        d.truth.validate(d.mdp, tolerance);
        return d;
    }

private:
    std::size_t states_, actions_;
    numvec probs_, rewards_;
    std::vector<std::uint8_t> mask_;
};

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

} // namespace

Domain riverswim(double discount) {
    constexpr std::size_t n = 6;
    constexpr std::size_t left = 0, right = 1;
    Builder b(n, 2);
    for (std::size_t s = 0; s < n; ++s) {
        if (s == 0) b.set(0, left, 0, 1.0, 5.0);
        else b.set(s, left, s - 1, 1.0, 0.0);
    }
    b.set(0, right, 0, 0.7, 0.0);
    b.set(0, right, 1, 0.3, 0.0);
    for (std::size_t s = 1; s + 1 < n; ++s) {
        b.set(s, right, s, 0.6, 0.0);
        b.set(s, right, s + 1, 0.3, 0.0);
        b.set(s, right, s - 1, 0.1, 0.0);
    }
    b.set(n - 1, right, n - 1, 0.3, 10000.0);
    b.set(n - 1, right, n - 2, 0.7, 0.0);
    numvec initial(n, 0.0);
    initial[1] = initial[2] = 0.5;
    return b.finish("riverswim", discount, initial);
}

Domain machine_replacement(double discount) {
    constexpr std::size_t conditions = 8, fast = 8, slow = 9, n = 10;
    constexpr std::size_t operate = 0, repair = 1;
    auto cost = [&](std::size_t s) {
        if (s == fast) return 2.0;
        if (s == slow) return 10.0;
        return s + 1 == conditions ? 20.0 : 0.0;
    };
    Builder b(n, 2);
    for (std::size_t s = 0; s < conditions; ++s) {
        const double r = -cost(s);
        if (s + 1 < conditions) {
            b.set(s, operate, s, 0.2, r);
            b.set(s, operate, s + 1, 0.8, r);
        } else {
            b.set(s, operate, s, 1.0, r);
        }
        b.set(s, repair, fast, 0.7, r);
        b.set(s, repair, slow, 0.3, r);
    }
    for (std::size_t a : {operate, repair}) {
        b.set(fast, a, 0, 0.6, -cost(fast));
        b.set(fast, a, fast, 0.4, -cost(fast));
        b.set(slow, a, 0, 0.2, -cost(slow));
        b.set(slow, a, slow, 0.8, -cost(slow));
    }
    numvec initial(n, 0.0);
    initial[0] = 1.0;
    return b.finish("machine-replacement", discount, initial);
}

Domain population_growth(std::size_t states, double discount) {
    require(states >= 2, ErrorCode::InvalidArgument, "population model needs at least two states");
    constexpr double growth[2] = {1.3, 0.8};
    constexpr double damage_per_unit = 5.0, control_cost = 40.0, cutoff = 1e-6;
    const std::size_t cap = states - 1;
    Builder b(states, 2);
    for (std::size_t a = 0; a < 2; ++a) {
        b.set(0, a, 0, 1.0, -(a == 1 ? control_cost : 0.0));
        for (std::size_t s = 1; s < states; ++s) {
            // Poisson(growth * s) with the tail beyond capacity lumped at the cap
            const double mean = growth[a] * double(s);
            numvec p(states, 0.0);
            double log_term = -mean, below = 0.0;
            for (std::size_t k = 0; k < cap; ++k) {
                if (k > 0) log_term += std::log(mean) - std::log(double(k));
                p[k] = std::exp(log_term);
                below += p[k];
            }
            p[cap] = std::max(0.0, 1.0 - below);
            double kept = 0.0;
            for (auto& x : p) {
                if (x < cutoff) x = 0.0;
                kept += x;
            }
            for (std::size_t next = 0; next < states; ++next)
                if (p[next] > 0.0)
                    b.set(s, a, next, p[next] / kept,
                          -(damage_per_unit * double(next) + (a == 1 ? control_cost : 0.0)));
        }
    }
    numvec initial(states, 0.0);
    const std::size_t lo = 1, hi = std::max<std::size_t>(1, states / 5);
    for (std::size_t s = lo; s <= hi; ++s) initial[s] = 1.0 / double(hi - lo + 1);
    return b.finish("population", discount, initial);
}

Domain inventory(std::size_t states, double discount) {
    require(states >= 2, ErrorCode::InvalidArgument, "inventory model needs at least two states");
    constexpr double price = 3.99, purchase = 2.49, holding = 0.03;
    const std::size_t cap = states - 1;
    const double mean = double(states) / 4.0, sd = double(states) / 6.0;

    // demand rounded to the nearest integer and clipped to [0, cap]
    numvec demand(states, 0.0);
    double assigned = 0.0;
    for (std::size_t d = 0; d < cap; ++d) {
        const double upper = normal_cdf(double(d) + 0.5, mean, sd);
        demand[d] = upper - assigned;
        assigned = upper;
    }
    demand[cap] = 1.0 - assigned;

    Builder b(states, states);
    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t a = 0; a < states; ++a) {
            const std::size_t stocked = std::min(cap, s + a);
            const double ordered = double(stocked - s);
            for (std::size_t next = 0; next <= stocked; ++next) {
                const std::size_t sold = stocked - next;
                double p;
                if (next == 0) {
                    p = 0.0;
                    for (std::size_t d = stocked; d < states; ++d) p += demand[d];
                } else {
                    p = demand[sold];
                }
                if (p <= 0.0) continue;
                b.set(s, a, next, p, price * double(sold) - purchase * ordered - holding * double(next));
            }
        }
    numvec initial(states, 1.0 / double(states));
    return b.finish("inventory", discount, initial);
}

Domain example1(double discount) {
    Builder b(4, 1);
    const double rewards[3] = {0.25, 0.25, -1.0};
    const double alpha[3] = {10.0, 10.0, 1.0};
    for (std::size_t next = 1; next < 4; ++next) b.set(0, 0, next, alpha[next - 1] / 21.0, rewards[next - 1]);
    for (std::size_t s = 1; s < 4; ++s) b.set(s, 0, s, 1.0, 0.0);
    numvec initial{1.0, 0.0, 0.0, 0.0};
    auto d = b.finish("example1", discount, initial);
    numvec concentration(16, 0.0);
    for (std::size_t next = 1; next < 4; ++next) concentration[next] = alpha[next - 1];
    for (std::size_t s = 1; s < 4; ++s) concentration[s * 4 + s] = 1.0;
    d.prior = DirichletPosterior(4, 1, std::move(concentration));
    return d;
}

std::vector<std::string> domain_names() {
    return {"riverswim", "machine-replacement", "population", "inventory", "example1"};
}

Domain make_domain(std::string_view name, std::size_t size, double discount) {
    auto pick = [&](double fallback) { return discount < 0.0 ? fallback : discount; };
    if (name == "riverswim") return riverswim(pick(riverswim_discount));
    if (name == "machine-replacement") return machine_replacement(pick(machine_replacement_discount));
    if (name == "population") return population_growth(size == 0 ? 51 : size, pick(population_discount));
    if (name == "inventory") return inventory(size == 0 ? 31 : size, pick(inventory_discount));
    if (name == "example1") return example1(pick(example1_discount));
    if (name == "cartpole")
        fail(ErrorCode::Unsupported, "the cartpole domain needs a physics simulator and state aggregation and is "
                                     "not provided; export a tabular model to CSV and load it instead");
    fail(ErrorCode::InvalidArgument, "unknown domain '" + std::string(name) + "'");
}

void save_mdp_csv(const std::string& path, const TabularMdp& mdp, const TransitionModel& model) {
    model.validate(mdp, 1e-9);
    std::string out = "# discount: " + io::format_double(mdp.discount()) + "\n# initial: ";
    for (std::size_t s = 0; s < mdp.num_states(); ++s) out += (s ? "," : "") + io::format_double(mdp.initial()[s]);
    out += "\nidstatefrom,idaction,idstateto,probability,reward\n";
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a)
            for (auto next : mdp.support(s, a))
                out += std::to_string(s) + "," + std::to_string(a) + "," + std::to_string(next) + "," +
                       io::format_double(model.row(s, a)[next]) + "," + io::format_double(mdp.reward(s, a, next)) +
                       "\n";
    io::write_file(path, out);
}

LoadedMdp load_mdp_csv(const std::string& path) {
    const auto table = io::read_csv(path);
    std::optional<double> discount;
    numvec initial;
    for (const auto& comment : table.comments) {
        const auto colon = comment.find(':');
        if (colon == std::string::npos) continue;
        const auto key = io::trim(std::string_view(comment).substr(0, colon));
        const auto value = std::string_view(comment).substr(colon + 1);
        if (key == "discount") discount = io::parse_double(io::trim(value), path + ": discount");
        if (key == "initial")
            for (const auto& part : io::split(value, ',')) initial.push_back(io::parse_double(part, path + ": initial"));
    }
    require(discount.has_value(), ErrorCode::Parse, path + ": missing '# discount:' header line");

    const auto c_from = table.column("idstatefrom"), c_action = table.column("idaction"),
               c_to = table.column("idstateto"), c_prob = table.column("probability"),
               c_reward = table.column("reward");
    struct Row {
        std::size_t s, a, next;
        double p, r;
    };
    std::vector<Row> rows;
    std::size_t states = 0, actions = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto context = path + " row " + std::to_string(i + 1);
        const auto& f = table.rows[i];
        Row row{io::parse_index(f[c_from], context), io::parse_index(f[c_action], context),
                io::parse_index(f[c_to], context), io::parse_double(f[c_prob], context),
                io::parse_double(f[c_reward], context)};
        states = std::max({states, row.s + 1, row.next + 1});
        actions = std::max(actions, row.a + 1);
        rows.push_back(row);
    }
    require(!rows.empty(), ErrorCode::Parse, path + ": no transitions");
    if (initial.empty()) {
        initial.assign(states, 0.0);
        initial[0] = 1.0;
    }
    require(initial.size() == states, ErrorCode::Parse,
            path + ": initial distribution has " + std::to_string(initial.size()) + " entries for " +
                std::to_string(states) + " states");
    Builder b(states, actions);
    for (const auto& row : rows) b.set(row.s, row.a, row.next, row.p, row.r);
    Domain d;
    try {
        d = b.finish(path, *discount, initial, 1e-9);
    } catch (const Error& e) {
        fail(e.code(), path + ": " + e.what());
    }
    return LoadedMdp{std::move(d.mdp), std::move(d.truth)};
}

} // namespace pcrit
