// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The decide/observe contract shared by learners, baselines and oracles.

#ifndef MAMAB_POLICY_H_
#define MAMAB_POLICY_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "mamab/cache_matrix.h"
#include "mamab/demand.h"
#include "mamab/env.h"
#include "mamab/topology.h"

namespace mamab {

struct SlotContext {
  // Global 1-based slot index; the t in ln t.
  std::int64_t slot = 1;
  const Network* net = nullptr;
  // Bumped whenever `net` describes a different geometry (user mobility).
  std::uint64_t network_revision = 0;
  // This slot's requests, exposed only to clairvoyant oracles.
  const RequestBatch* clairvoyant = nullptr;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;

  // Placement for ctx.slot. Never exceeds the cache budget.
  virtual CacheMatrix decide(const SlotContext& ctx) = 0;

  // Called exactly once per slot after decide. `new_files` are files
  // requested for the first time this slot, ascending.
  virtual void observe(const SlotContext& ctx, const ServiceOutcome& outcome,
                       const EdgeRewardTable& edges,
                       std::span<const FileId> new_files) = 0;

  // True when the last decide was a forced-exploration slot.
  virtual bool in_initial_phase() const { return false; }
};

}  // namespace mamab

#endif  // MAMAB_POLICY_H_
