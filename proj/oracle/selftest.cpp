#include <algorithm>
#include <cmath>
#include <random>

#include "fraclab/extremal_solver.hpp"
#include "fraclab/limit_solver.hpp"
#include "fraclab/nonlocal_ops.hpp"
#include "oracle.hpp"

namespace oracle {

namespace {

SelftestCase make_case(std::string name, double error, double tolerance) {
  return {std::move(name), error, tolerance, error <= tolerance};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

fraclab::Domain lattice(const Interval& iv) {
  return fraclab::build_domain(fraclab::DomainSpec::interval(iv.a, iv.b), iv.n, iv.b - iv.a);
}

fraclab::Weight uniform(const fraclab::Domain& d) {
  return fraclab::normalize_weight(fraclab::ScalarField(d.size(), 1.0), d);
}

}  // namespace

std::vector<SelftestCase> run_selftest() {
  std::vector<SelftestCase> out;

  {
    const Interval iv{0.0, 1.0, 9};
    const auto d = lattice(iv);
    std::vector<double> hat(9);
    for (int k = 0; k < 9; ++k) hat[k] = 1.0 - std::abs(2.0 * iv.node(k) - 1.0);
    for (double p : {2.0, 3.0, 5.0}) {
      const double mine = fraclab::gagliardo_seminorm_log(fraclab::ScalarField(hat), d, {0.5, p, true});
      const double ref = std::log(seminorm_pow(hat, iv, 0.5, p)) / p;
      out.push_back(make_case("seminorm n=9 p=" + std::to_string(static_cast<int>(p)),
                              rel(std::exp(mine), std::exp(ref)), 1e-12));
    }

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> u(9), v(9);
    for (int k = 0; k < 9; ++k) {
      u[k] = unit(rng);
      v[k] = unit(rng);
    }
    const double mine = fraclab::weak_pairing(fraclab::ScalarField(u), fraclab::ScalarField(v), d, {0.5, 3.0, true});
    out.push_back(make_case("pairing n=9 p=3", rel(mine, pairing(u, v, iv, 0.5, 3.0)), 1e-10));
  }

  {
    const Interval iv{0.0, 1.0, 3};
    const auto d = lattice(iv);
    const auto w = uniform(d);
    const fraclab::SeminormParams prm{0.5, 2.0, true};
    const Minimum ref = brute_force_lambda(iv, 0.5, 2.0);
    const auto sol = fraclab::solve_extremal(d, w, prm);
    out.push_back(make_case("lambda n=3 p=2", rel(std::exp(sol.log_lambda), ref.value), 1e-4));
    double sup = 0.0;
    for (int k = 0; k < 3; ++k) sup = std::max(sup, std::abs(sol.u_p[k] - ref.u[k]));
    out.push_back(make_case("extremal n=3 p=2 sup-norm", sup, 1e-3));

    fraclab::ExtremalSolution at_ref = sol;
    at_ref.u_p = fraclab::ScalarField(ref.u);
    at_ref.log_lambda = std::log(ref.value);
    out.push_back(make_case("euler-lagrange at reference minimiser",
                            fraclab::euler_lagrange_residual(at_ref, d, w, prm), 1e-4));
  }

  {
    const Interval iv{0.0, 1.0, 5};
    const auto d = lattice(iv);
    const auto w = uniform(d);
    const Minimum ref = brute_force_mu(iv, 0.5);
    const auto lim = fraclab::minimize_holder_quotient(d, w, 0.5, fraclab::ScalarField(5, 1.0));
    out.push_back(make_case("mu n=5", rel(lim.mu, ref.value), 1e-3));
  }
  return out;
}

}  // namespace oracle
