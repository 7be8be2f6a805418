// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "jointopt/channel_model.hpp"
#include "oracles.hpp"

using namespace jointopt;

namespace {

CMatrix random_hermitian(Rng& rng, int n) {
  const CMatrix a = rng.complex_gaussian(n, n);
  return (a + a.adjoint()) / 2.0;
}

CMatrix random_psd(Rng& rng, int n) {
  const CMatrix a = rng.complex_gaussian(n, n);
  return a * a.adjoint() / n;
}

}  // namespace

TEST_CASE("exponential correlation") {
  SUBCASE("theta 0.9, n 2") {
    const CMatrix m = exponential_correlation(0.9, 2);
    CHECK(m(0, 0).real() == 1.0);
    CHECK(m(0, 1).real() == doctest::Approx(0.9));
    CHECK(m(1, 0).real() == doctest::Approx(0.9));
  }
  SUBCASE("theta 0 is identity") { CHECK(exponential_correlation(0.0, 4).isApprox(CMatrix::Identity(4, 4))); }
  SUBCASE("theta 0.5, n 3 is positive definite") {
    const CMatrix m = exponential_correlation(0.5, 3);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(oracle::exp_corr(0.5, 3));
    CHECK(min_eigenvalue(m) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
    CHECK(min_eigenvalue(m) > 0.0);
    CHECK((m - oracle::exp_corr(0.5, 3)).norm() < 1e-15);
  }
  SUBCASE("theta outside [0, 1)") {
    CHECK_THROWS_AS(exponential_correlation(1.0, 2), DomainError);
    CHECK_THROWS_AS(exponential_correlation(-0.1, 2), DomainError);
  }
}

TEST_CASE("sorted eigendecomposition") {
  SUBCASE("identity keeps the identity basis") {
    const Evd e = sorted_evd(CMatrix::Identity(3, 3));
    CHECK(e.values.isApprox(RVector::Ones(3)));
    CHECK((e.vectors - CMatrix::Identity(3, 3)).norm() < 1e-12);
  }
  SUBCASE("diagonal input is permuted") {
    CMatrix d = CMatrix::Zero(3, 3);
    d.diagonal() << 1.0, 3.0, 2.0;
    const Evd e = sorted_evd(d);
    CHECK(e.values(0) == doctest::Approx(3.0));
    CHECK(e.values(1) == doctest::Approx(2.0));
    CHECK(e.values(2) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(0, 2)) == doctest::Approx(1.0));
  }
  SUBCASE("ascending order") {
    const Evd e = sorted_evd(exponential_correlation(0.9, 4), EigenOrder::Ascending);
    for (int i = 1; i < 4; ++i) CHECK(e.values(i) >= e.values(i - 1));
  }
  SUBCASE("non-Hermitian input") {
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(sorted_evd(m), DomainError);
  }
  SUBCASE("repeated input gives identical output") {
    Rng rng(3);
    const CMatrix m = random_hermitian(rng, 5);
    const Evd a = sorted_evd(m), b = sorted_evd(m);
    CHECK(a.vectors == b.vectors);
    CHECK(a.values == b.values);
  }
}

TEST_CASE("eigendecomposition reconstructs random Hermitian matrices") {
  Rng rng(11);
  for (int n = 2; n <= 16; ++n) {
    const CMatrix m = random_hermitian(rng, n);
    const Evd e = sorted_evd(m);
    const CMatrix back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    CHECK(frobenius_rel_error(back, m) <= 1e-10);
    for (int i = 1; i < n; ++i) CHECK(e.values(i) <= e.values(i - 1));
    CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(n, n)).norm() < 1e-12);
  }
}

TEST_CASE("Hermitian square root") {
  CHECK(hermitian_sqrt(CMatrix::Identity(3, 3)).isApprox(CMatrix::Identity(3, 3)));
  CMatrix d = CMatrix::Zero(2, 2);
  d.diagonal() << 4.0, 9.0;
  const CMatrix r = hermitian_sqrt(d);
  CHECK(r(0, 0).real() == doctest::Approx(2.0));
  CHECK(r(1, 1).real() == doctest::Approx(3.0));
  CHECK(std::abs(r(0, 1)) < 1e-15);
  const CMatrix psi = exponential_correlation(0.9, 4);
  const CMatrix s = hermitian_sqrt(psi);
  CHECK(frobenius_rel_error(s * s, psi) <= 1e-10);

  CMatrix indefinite = CMatrix::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  CHECK_THROWS_AS(hermitian_sqrt(indefinite), DomainError);
}

TEST_CASE("square root property on random PSD matrices") {
  Rng rng(12);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 15;
    const CMatrix m = random_psd(rng, n);
    const CMatrix r = hermitian_sqrt(m);
    CHECK(frobenius_rel_error(r * r, m) <= 1e-10);
    CHECK(is_hermitian(r));
    CHECK(min_eigenvalue(r) >= -1e-10);
  }
}

TEST_CASE("DFT unitary") {
  const CMatrix one = dft_unitary(1);
  CHECK(one.rows() == 1);
  CHECK(std::abs(one(0, 0) - cplx(1.0, 0.0)) < 1e-15);
  const CMatrix two = dft_unitary(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(two(0, 0) - s) < 1e-15);
  CHECK(std::abs(two(0, 1) - s) < 1e-15);
  CHECK(std::abs(two(1, 0) - s) < 1e-15);
  CHECK(std::abs(two(1, 1) + s) < 1e-15);
  const CMatrix eight = dft_unitary(8);
  CHECK((eight.adjoint() * eight - CMatrix::Identity(8, 8)).norm() <= 1e-12);
  CHECK(std::abs(eight(1, 1) - std::polar(1.0 / std::sqrt(8.0), -2.0 * M_PI / 8.0)) < 1e-15);
}

TEST_CASE("channel model accessors") {
  const auto model = CorrelatedChannelModel::exponential(0.9, 4);
  const CMatrix back = model.psi_evecs() * model.psi_evals().cast<cplx>().asDiagonal() * model.psi_evecs().adjoint();
  CHECK(frobenius_rel_error(back, model.psi()) <= 1e-10);
  for (int i = 1; i < 4; ++i) CHECK(model.psi_evals()(i) < model.psi_evals()(i - 1));
  for (int i = 0; i < 4; ++i) CHECK(model.psi()(i, i).real() == 1.0);
  CHECK_THROWS_AS(CorrelatedChannelModel(CMatrix::Zero(2, 2)), DomainError);
}

TEST_CASE("channel sampling") {
  const auto model = CorrelatedChannelModel::exponential(0.9, 2);
  SUBCASE("same seed, same draw") {
    Rng a(42), b(42);
    const auto ra = sample_channel(model, 2, a), rb = sample_channel(model, 2, b);
    CHECK(ra.h == rb.h);
    CHECK(ra.h_white == rb.h_white);
    CHECK((ra.h - ra.h_white * model.psi_sqrt()).norm() <= 1e-12);
  }
  SUBCASE("moments over 1e5 draws") {
    const int trials = 100000;
    const int n_rx = 2;
    Rng rng(1);
    CMatrix acc = CMatrix::Zero(2, 2);
    cplx mean = 0.0;
    double real_var = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto r = sample_channel(model, n_rx, rng);
      acc += r.h.adjoint() * r.h;
      mean += r.h_white.sum();
      real_var += r.h_white.real().squaredNorm();
    }
    mean /= static_cast<double>(trials * 4);
    real_var /= trials * 4;
    CHECK(std::abs(mean.real()) < 0.02);
    CHECK(std::abs(mean.imag()) < 0.02);
    CHECK(real_var == doctest::Approx(0.5).epsilon(0.02));
    CHECK(frobenius_rel_error(acc / static_cast<double>(trials * n_rx), model.psi()) < 0.02);
  }
  SUBCASE("uncorrelated model") {
    const auto iid = CorrelatedChannelModel::exponential(0.0, 2);
    Rng rng(2);
    CMatrix acc = CMatrix::Zero(2, 2);
    for (int t = 0; t < 100000; ++t) {
      const auto r = sample_channel(iid, 1, rng);
      acc += r.h.adjoint() * r.h;
    }
    CHECK(frobenius_rel_error(acc / 100000.0, CMatrix::Identity(2, 2)) < 0.02);
  }
}

TEST_CASE("scenario configuration") {
  ScenarioConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("streams exceed antennas") {
    cfg.n_data = 9;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("energy below one training symbol") {
    cfg.total_energy = cfg.train_power;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("indefinite training noise") {
    CMatrix r = CMatrix::Identity(8, 8);
    r(3, 3) = -1.0;
    cfg.train_noise_cov = r;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("snr sets the noise variance") {
    cfg.set_snr_db(20.0);
    CHECK(cfg.noise_var == doctest::Approx(0.01));
    CHECK(cfg.snr_db() == doctest::Approx(20.0));
  }
  SUBCASE("derived data power follows the energy budget") {
    cfg.data_power_mode = DataPowerMode::Derived;
    cfg.total_energy = 200.0;
    const PhaseBudget b = phase_budget(cfg, 56);
    CHECK(b.feasible);
    CHECK(b.data_power == doctest::Approx((200.0 - 5.6) / 200.0));
    CHECK((cfg.coherence_time - 56) * b.data_power + b.train_energy <= cfg.total_energy + 1e-9);
  }
  SUBCASE("fixed mode marks over-budget lengths infeasible") {
    cfg.train_power = 2.0;
    cfg.total_energy = 260.0;
    // (256 - t) + 2t <= 260 holds for t <= 4 only, which is below n_data.
    CHECK(feasible_training_lengths(cfg).empty());
  }
  SUBCASE("training range is clamped to [n_data, T-1]") {
    const auto ts = feasible_training_lengths(cfg, {1, 1000});
    CHECK(ts.front() == 8);
    CHECK(ts.back() == 255);
  }
}
