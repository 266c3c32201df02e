#pragma once

#include "pcrit/bayes.hpp"
#include "pcrit/mdp.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcrit {

/// A benchmark problem: the MDP, its true model, and optionally a problem-specific prior.
struct Domain {
    std::string name;
    TabularMdp mdp;
    /// Data-generating model; for example1 this is the posterior mean.
    TransitionModel truth;
    /// Prior over transitions; unset means a uniform Dirichlet on the support.
    std::optional<DirichletPosterior> prior;
};

inline constexpr double riverswim_discount = 0.95;
inline constexpr double machine_replacement_discount = 0.90;
inline constexpr double population_discount = 0.95;
inline constexpr double inventory_discount = 0.95;
inline constexpr double example1_discount = 0.90;

/// Six-state chain; left is safe and small, right risks a long swim to a large reward.
Domain riverswim(double discount = riverswim_discount);

/**
 * Ten states: conditions 0..7 and two repair states (8 fast, 9 slow).
 * Action 0 operates the machine, action 1 sends it to repair.
 */
Domain machine_replacement(double discount = machine_replacement_discount);

/// Population levels 0..S-1; action 1 applies a costly control that lowers growth.
Domain population_growth(std::size_t states = 51, double discount = population_discount);

/// Stock levels 0..S-1; action a orders a units, demand is a discretized normal.
Domain inventory(std::size_t states = 31, double discount = inventory_discount);

/// One decision from state 0 into three absorbing states with a Dirichlet(10, 10, 1) posterior.
Domain example1(double discount = example1_discount);

/// Names accepted by make_domain.
std::vector<std::string> domain_names();

/**
 * Builds a domain by name. size = 0 keeps the default state count and
 * discount < 0 keeps the default discount. cartpole is rejected as unsupported.
 */
Domain make_domain(std::string_view name, std::size_t size = 0, double discount = -1.0);

/**
 * MDP CSV: '# discount: g' and '# initial: p_0,...' comment lines, then
 * idstatefrom,idaction,idstateto,probability,reward rows. Listed rows form the
 * support; missing rows are outside it.
 */
void save_mdp_csv(const std::string& path, const TabularMdp& mdp, const TransitionModel& model);

struct LoadedMdp {
    TabularMdp mdp;
    TransitionModel model;
};

LoadedMdp load_mdp_csv(const std::string& path);

} // namespace pcrit
