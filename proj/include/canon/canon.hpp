// Copyright 2026 The canon Authors.
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

/// \file canon.hpp
/// Numerical core without the I/O layer (no JSON or CLI dependencies).

#pragma once

#include "canon/approx.hpp"
#include "canon/closed_forms.hpp"
#include "canon/error.hpp"
#include "canon/inverse.hpp"
#include "canon/measure.hpp"
#include "canon/opuc.hpp"
#include "canon/quadrature.hpp"
#include "canon/toeplitz.hpp"
