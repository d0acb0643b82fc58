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

#ifndef ENL_ALLOC_PROBE_HPP_
#define ENL_ALLOC_PROBE_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>

namespace enl {

// Records every matrix buffer allocated on the current thread while alive.
// Probes nest; only the innermost one is notified.
class AllocationProbe {
 public:
  AllocationProbe();
  ~AllocationProbe();
  AllocationProbe(const AllocationProbe&) = delete;
  AllocationProbe& operator=(const AllocationProbe&) = delete;

  std::uint64_t count() const { return count_; }
  std::uint64_t total_bytes() const { return total_bytes_; }
  // Largest single buffer seen, in bytes.
  std::uint64_t largest_bytes() const { return largest_bytes_; }
  // Largest single buffer seen, in elements of whatever type requested it.
  std::uint64_t largest_elements() const { return largest_elements_; }

  static void notify(std::uint64_t elements, std::uint64_t bytes);

 private:
  AllocationProbe* previous_;
  std::uint64_t count_ = 0;
  std::uint64_t total_bytes_ = 0;
  std::uint64_t largest_bytes_ = 0;
  std::uint64_t largest_elements_ = 0;
};

// std::allocator that reports to the active AllocationProbe.
template <typename T>
struct TrackingAllocator {
  using value_type = T;

  TrackingAllocator() noexcept = default;
  template <typename U>
  TrackingAllocator(const TrackingAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    AllocationProbe::notify(n, n * sizeof(T));
    return std::allocator<T>{}.allocate(n);
  }
  void deallocate(T* p, std::size_t n) noexcept { std::allocator<T>{}.deallocate(p, n); }

  template <typename U>
  bool operator==(const TrackingAllocator<U>&) const noexcept { return true; }
};

}  // namespace enl

#endif  // ENL_ALLOC_PROBE_HPP_
