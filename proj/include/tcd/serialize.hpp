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

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "ensemble.hpp"
#include "linalg.hpp"
#include "one_ring.hpp"

namespace tcd
{

// Schema identifier for covariance/ensemble JSON files. Complex numbers are
// [re, im] pairs, matrices row-major.
inline constexpr const char* cov_schema_version = "tcd-cov/1";

namespace detail
{

inline nlohmann::json cmat_to_json(const cmat& a)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            rows.push_back({a(i, j).real(), a(i, j).imag()});
    return rows;
}

inline cmat cmat_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols)
{
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols)
        throw config_error("covariance file: entry array has the wrong length");
    cmat a(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index jj = 0; jj < cols; ++jj, ++idx)
        {
            const auto& e = j[idx];
            if (!e.is_array() || e.size() != 2)
                throw config_error("covariance file: entries must be [re, im] pairs");
            a(i, jj) = std::complex<double>(e[0].get<double>(), e[1].get<double>());
        }
    return a;
}

} // namespace detail

inline nlohmann::json to_json(const covariance_matrix& cov)
{
    nlohmann::json j;
    j["version"] = cov_schema_version;
    j["kind"] = "covariance";
    j["m"] = cov.m();
    j["entries"] = detail::cmat_to_json(cov.r);
    return j;
}

inline covariance_matrix covariance_from_json(const nlohmann::json& j)
{
    if (j.value("version", "") != cov_schema_version)
        throw config_error("covariance file: unsupported schema version");
    if (j.value("kind", "") != "covariance")
        throw config_error("covariance file: kind must be 'covariance'");
    const int m = j.at("m").get<int>();
    if (m < 1)
        throw config_error("covariance file: bad dimension");
    covariance_matrix cov;
    cov.r = detail::cmat_from_json(j.at("entries"), m, m);
    return cov;
}

inline nlohmann::json to_json(const unitary_ensemble& ens)
{
    nlohmann::json j;
    j["version"] = cov_schema_version;
    j["kind"] = "ensemble";
    j["m"] = ens.m;
    j["r"] = ens.r;
    j["g"] = ens.g();
    j["groups"] = nlohmann::json::array();
    for (const auto& grp : ens.groups)
    {
        nlohmann::json gj;
        gj["basis"] = detail::cmat_to_json(grp.basis);
        gj["eigenvalues"] = std::vector<double>(grp.eigenvalues.begin(), grp.eigenvalues.end());
        j["groups"].push_back(std::move(gj));
    }
    return j;
}

inline unitary_ensemble ensemble_from_json(const nlohmann::json& j)
{
    if (j.value("version", "") != cov_schema_version)
        throw config_error("ensemble file: unsupported schema version");
    if (j.value("kind", "") != "ensemble")
        throw config_error("ensemble file: kind must be 'ensemble'");
    unitary_ensemble ens;
    ens.m = j.at("m").get<int>();
    ens.r = j.at("r").get<int>();
    const int g = j.at("g").get<int>();
    if (ens.m < 1 || ens.r < 1 || g < 1 || static_cast<long long>(ens.r) * g > ens.m)
        throw config_error("ensemble file: inconsistent dimensions");
    const auto& groups = j.at("groups");
    if (!groups.is_array() || static_cast<int>(groups.size()) != g)
        throw config_error("ensemble file: group count mismatch");
    for (const auto& gj : groups)
    {
        group_eigen_structure grp;
        grp.basis = detail::cmat_from_json(gj.at("basis"), ens.m, ens.r);
        const auto& ev = gj.at("eigenvalues");
        if (!ev.is_array() || static_cast<int>(ev.size()) != ens.r)
            throw config_error("ensemble file: eigenvalue count mismatch");
        grp.eigenvalues.resize(ens.r);
        for (int i = 0; i < ens.r; ++i)
            grp.eigenvalues(i) = ev[i].get<double>();
        ens.groups.push_back(std::move(grp));
    }
    return ens;
}

// Writes via a sibling temporary file plus rename, so readers never observe a
// partially written file.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content)
{
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (!dir.empty())
        fs::create_directories(dir);
    std::random_device rd;
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(rd() % 1000000);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw config_error("cannot open output file: " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw config_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
    {
        fs::remove(tmp);
        throw config_error("cannot rename temporary output onto " + path.string());
    }
}

inline nlohmann::json load_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open file: " + path.string());
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw config_error("cannot parse JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

} // namespace tcd
