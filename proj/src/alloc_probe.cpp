/* Copyright 2026 The ENL Kernels Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "enl/alloc_probe.hpp"

#include <algorithm>

namespace enl {
namespace {
thread_local AllocationProbe* active_probe = nullptr;
}  // namespace

AllocationProbe::AllocationProbe() : previous_(active_probe) { active_probe = this; }

AllocationProbe::~AllocationProbe() { active_probe = previous_; }

void AllocationProbe::notify(std::uint64_t elements, std::uint64_t bytes) {
  AllocationProbe* p = active_probe;
  if (p == nullptr) return;
  ++p->count_;
  p->total_bytes_ += bytes;
  p->largest_bytes_ = std::max(p->largest_bytes_, bytes);
  p->largest_elements_ = std::max(p->largest_elements_, elements);
}

}  // namespace enl
