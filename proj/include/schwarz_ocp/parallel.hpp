/*
 Copyright 2026 The schwarz-ocp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef SCHWARZ_OCP_PARALLEL_HPP
#define SCHWARZ_OCP_PARALLEL_HPP

#include <functional>

namespace schwarz_ocp {

// Runs fn(0..count-1) on up to `workers` threads (0 picks the hardware
// concurrency). Each index runs exactly once; the first failure by index
// order is rethrown after all threads join.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

int resolve_workers(int workers);

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_PARALLEL_HPP
