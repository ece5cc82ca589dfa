#ifndef ROBUSTCI_ROBUSTCI_HPP
#define ROBUSTCI_ROBUSTCI_HPP

#include "robustci/adversary.hpp"
#include "robustci/binomial_ci.hpp"
#include "robustci/dist.hpp"
#include "robustci/er_graph.hpp"
#include "robustci/estimators.hpp"
#include "robustci/interval.hpp"
#include "robustci/poisson_ci.hpp"
#include "robustci/rng.hpp"
#include "robustci/simulation.hpp"

#endif
