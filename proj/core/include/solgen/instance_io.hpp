/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>

#include "solgen/milp.hpp"

namespace solgen {

// JSON instance files (.milp.json), schema version 1. The matrix is stored
// as sparse triplets; +-infinity bounds are encoded as "inf"/"-inf" strings.
// read_instance(write_instance(inst)) reproduces the instance exactly,
// including coefficient bits.
void write_instance(const MilpInstance& inst, const std::string& path);
MilpInstance read_instance(const std::string& path);

std::string instance_to_json_string(const MilpInstance& inst);
MilpInstance instance_from_json_string(const std::string& text);

// Fixed-format MPS export (.mps). Rows keep their stored G/L senses; a
// maximization objective is emitted via an OBJSENSE section. Numeric fields
// are clipped to 12 characters, so MPS output is for external cross-checks,
// not for exact round trips -- the JSON format is the native one.
void write_mps(const MilpInstance& inst, const std::string& path);

}  // namespace solgen
