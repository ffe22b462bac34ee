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

#include "tcd/version.hpp"
#include "tcd/errors.hpp"
#include "tcd/rng.hpp"
#include "tcd/quadrature.hpp"
#include "tcd/linalg.hpp"
#include "tcd/one_ring.hpp"
#include "tcd/ensemble.hpp"
#include "tcd/serialize.hpp"
#include "tcd/capacity.hpp"
#include "tcd/asymptotics.hpp"
#include "tcd/pilot.hpp"
#include "tcd/experiments.hpp"
