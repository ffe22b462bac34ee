// SPDX-License-Identifier: Apache-2.0
//
// tcd - transmit-correlation diversity toolkit for multiuser MIMO capacity analysis
// Copyright (C) 2026 the tcd contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed
// under the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR
// CONDITIONS OF ANY KIND, either express or implied. See the License for the
// specific language governing permissions and limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <tcd/ensemble.hpp>
#include <tcd/one_ring.hpp>
#include <tcd/serialize.hpp>

namespace
{
constexpr double deg = 3.14159265358979323846 / 180.0;
} // namespace

TEST_CASE("synthesized unitary ensembles have mutually orthogonal group bases")
{
    const tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(8, 4, 2, {{4, 4}}, 3);
    REQUIRE(ens.m == 8);
    REQUIRE(ens.g() == 4);
    REQUIRE(ens.r == 2);

    tcd::cmat all(8, 8);
    for (int i = 0; i < 4; ++i)
        all.middleCols(2 * i, 2) = ens.groups[i].basis;
    const tcd::cmat gram = all.adjoint() * all;
    REQUIRE((gram - tcd::cmat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(tcd::ensemble_cross_coherence(ens) < 1e-12);
}

TEST_CASE("ensemble synthesis is deterministic in the seed")
{
    const tcd::unitary_ensemble a = tcd::synthesize_unitary_ensemble(6, 2, 3, {{2, 2, 2}}, 17);
    const tcd::unitary_ensemble b = tcd::synthesize_unitary_ensemble(6, 2, 3, {{2, 2, 2}}, 17);
    const tcd::unitary_ensemble c = tcd::synthesize_unitary_ensemble(6, 2, 3, {{2, 2, 2}}, 18);
    REQUIRE((a.groups[0].basis - b.groups[0].basis).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((a.groups[1].basis - b.groups[1].basis).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((a.groups[0].basis - c.groups[0].basis).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("ensemble synthesis validates profiles and dimensions")
{
    // Profile must sum to the antenna count.
    REQUIRE_THROWS_AS(tcd::synthesize_unitary_ensemble(8, 4, 2, {{3, 4}}, 1),
                      tcd::invalid_input);
    // Profile length must equal the rank.
    REQUIRE_THROWS_AS(tcd::synthesize_unitary_ensemble(8, 4, 2, {{8}}, 1), tcd::invalid_input);
    // r * g must fit into m.
    REQUIRE_THROWS_AS(tcd::synthesize_unitary_ensemble(6, 4, 2, {{3, 3}}, 1),
                      tcd::invalid_input);
    // Eigenvalues must be positive.
    REQUIRE_THROWS_AS(tcd::synthesize_unitary_ensemble(8, 4, 2, {{8, 0}}, 1),
                      tcd::invalid_input);
}

TEST_CASE("eigendecomposition recovers a planted eigenstructure")
{
    const tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(8, 1, 8,
                                                                       {{3, 2, 1, 0.8, 0.6, 0.3,
                                                                         0.2, 0.1}},
                                                                       5);
    const tcd::group_eigen_structure& src = ens.groups[0];
    tcd::covariance_matrix cov;
    cov.r = src.basis * src.eigenvalues.asDiagonal() * src.basis.adjoint();

    const tcd::group_eigen_structure rec = tcd::eigen_decompose(cov, 1e-6);
    REQUIRE(rec.rank() == 8);
    for (int i = 0; i < 8; ++i)
        REQUIRE(rec.eigenvalues(i) == Catch::Approx(src.eigenvalues(i)).margin(1e-10));

    // The reconstruction must match even though eigenvector phases may not.
    const tcd::cmat back = rec.basis * rec.eigenvalues.asDiagonal() * rec.basis.adjoint();
    REQUIRE((back - cov.r).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("eigendecomposition truncates a narrow scattering ring")
{
    const tcd::one_ring_params p{30.0 * deg, 5.0 * deg, 0.5};
    const tcd::covariance_matrix cov = tcd::one_ring_covariance(16, p);
    const tcd::group_eigen_structure s = tcd::eigen_decompose(cov);
    REQUIRE(s.rank() < 16);
    REQUIRE(s.rank() >= 1);
    // Retained eigenvalues carry almost the whole trace.
    REQUIRE(s.eigenvalues.sum() == Catch::Approx(16.0).epsilon(0.01));
    // Basis columns stay orthonormal after truncation.
    const tcd::cmat gram = s.basis.adjoint() * s.basis;
    REQUIRE((gram - tcd::cmat::Identity(s.rank(), s.rank())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigendecomposition rejects non-Hermitian input")
{
    tcd::covariance_matrix cov;
    cov.r = tcd::cmat::Random(4, 4);
    cov.r(0, 1) = {5.0, 5.0};
    REQUIRE_THROWS_AS(tcd::eigen_decompose(cov), tcd::invalid_input);
}

TEST_CASE("group channel draws factor through the eigenbasis")
{
    const tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(8, 4, 2, {{7, 1}}, 9);
    const std::vector<tcd::cmat> full = tcd::sample_group_channels(ens, 3, 21, 0);
    const std::vector<tcd::cmat> eff = tcd::sample_effective_channels(ens, 3, 21, 0);
    REQUIRE(full.size() == 4);
    REQUIRE(eff.size() == 4);
    for (int gdx = 0; gdx < 4; ++gdx)
    {
        REQUIRE(full[gdx].rows() == 8);
        REQUIRE(full[gdx].cols() == 3);
        REQUIRE(eff[gdx].rows() == 2);
        const tcd::cmat rotated = ens.groups[gdx].basis * eff[gdx];
        REQUIRE((rotated - full[gdx]).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("channel second moments match the covariance model")
{
    const tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(4, 2, 2, {{3, 1}}, 33);
    const int trials = 20000;
    double power = 0.0;
    tcd::cmat accum = tcd::cmat::Zero(4, 4);
    for (int t = 0; t < trials; ++t)
    {
        tcd::philox_rng rng(2024, static_cast<std::uint64_t>(t));
        const std::vector<tcd::cmat> h = tcd::sample_group_channels(ens, 1, rng);
        power += h[0].col(0).squaredNorm();
        accum += h[0].col(0) * h[0].col(0).adjoint();
    }
    // E ||h||^2 = trace(R) = 4 for each user.
    REQUIRE(power / trials == Catch::Approx(4.0).epsilon(0.03));
    const tcd::cmat model = ens.groups[0].basis
                            * ens.groups[0].eigenvalues.asDiagonal()
                            * ens.groups[0].basis.adjoint();
    REQUIRE((accum / trials - model).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("per-user channel draws require consistent antenna counts")
{
    const tcd::unitary_ensemble a = tcd::synthesize_unitary_ensemble(4, 1, 2, {{2, 2}}, 1);
    const tcd::unitary_ensemble b = tcd::synthesize_unitary_ensemble(6, 1, 2, {{3, 3}}, 1);
    std::vector<tcd::group_eigen_structure> users{a.groups[0], b.groups[0]};
    tcd::philox_rng rng(1, 0);
    REQUIRE_THROWS_AS(tcd::sample_user_channels(users, rng), tcd::invalid_input);
}

TEST_CASE("covariance JSON round trip is lossless")
{
    const tcd::one_ring_params p{10.0 * deg, 8.0 * deg, 0.5};
    const tcd::covariance_matrix cov = tcd::one_ring_covariance(6, p);
    const nlohmann::json j = tcd::to_json(cov);
    REQUIRE(j.at("version") == tcd::cov_schema_version);
    const tcd::covariance_matrix back = tcd::covariance_from_json(j);
    REQUIRE((back.r - cov.r).cwiseAbs().maxCoeff() == 0.0);

    nlohmann::json bad = j;
    bad["kind"] = "ensemble";
    REQUIRE_THROWS_AS(tcd::covariance_from_json(bad), tcd::config_error);
    bad = j;
    bad["version"] = "tcd-cov/999";
    REQUIRE_THROWS_AS(tcd::covariance_from_json(bad), tcd::config_error);
}

TEST_CASE("ensemble JSON round trip is lossless")
{
    const tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(8, 4, 2, {{6, 2}}, 77);
    const nlohmann::json j = tcd::to_json(ens);
    const tcd::unitary_ensemble back = tcd::ensemble_from_json(j);
    REQUIRE(back.m == ens.m);
    REQUIRE(back.r == ens.r);
    REQUIRE(back.g() == ens.g());
    for (int i = 0; i < 4; ++i)
    {
        REQUIRE((back.groups[i].basis - ens.groups[i].basis).cwiseAbs().maxCoeff() == 0.0);
        REQUIRE((back.groups[i].eigenvalues - ens.groups[i].eigenvalues).cwiseAbs().maxCoeff()
                == 0.0);
    }

    nlohmann::json bad = j;
    bad["groups"].erase(3);
    REQUIRE_THROWS_AS(tcd::ensemble_from_json(bad), tcd::config_error);
}

TEST_CASE("atomic text writes land complete and clean up temporaries")
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tcd_test_io";
    const fs::path file = dir / "nested" / "out.txt";
    fs::remove_all(dir);

    tcd::write_text_atomic(file, "payload\n");
    REQUIRE(fs::exists(file));

    std::ifstream in(file);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(content == "payload\n");

    int stray = 0;
    for (const auto& e : fs::directory_iterator(file.parent_path()))
        if (e.path().string().find(".tmp") != std::string::npos)
            ++stray;
    REQUIRE(stray == 0);
    fs::remove_all(dir);
}

TEST_CASE("JSON file loading reports missing and malformed files")
{
    namespace fs = std::filesystem;
    REQUIRE_THROWS_AS(tcd::load_json_file("/nonexistent/path/x.json"), tcd::config_error);

    const fs::path bad = fs::temp_directory_path() / "tcd_bad.json";
    tcd::write_text_atomic(bad, "{not json");
    REQUIRE_THROWS_AS(tcd::load_json_file(bad), tcd::config_error);
    fs::remove(bad);
}
