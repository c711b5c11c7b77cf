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

#ifndef SCHWARZ_OCP_ERRORS_HPP
#define SCHWARZ_OCP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace schwarz_ocp {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension or layout mismatch between trajectories, partitions and problems.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A user callback could not be evaluated at the queried point.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class TrigSingularity : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

// Raised when W_k = R_k + B_k' K_{k+1} B_k fails its Cholesky factorization.
// Stage -1 denotes the free initial state block K_0.
class IndefiniteW : public Error {
 public:
  explicit IndefiniteW(int stage)
      : Error("W is not positive definite at stage " + std::to_string(stage)),
        stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

class SingularKkt : public Error {
 public:
  using Error::Error;
};

class ConvexifyBreakdown : public Error {
 public:
  explicit ConvexifyBreakdown(int stage)
      : Error("convexification breakdown: R~ singular at stage " +
              std::to_string(stage)),
        stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

class NotAtKkt : public Error {
 public:
  using Error::Error;
};

class MaxIterations : public Error {
 public:
  using Error::Error;
};

class LineSearchFailure : public Error {
 public:
  using Error::Error;
};

class InvalidPartition : public Error {
 public:
  using Error::Error;
};

class InvalidOverlap : public Error {
 public:
  using Error::Error;
};

class MissingBoundary : public Error {
 public:
  using Error::Error;
};

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_ERRORS_HPP
