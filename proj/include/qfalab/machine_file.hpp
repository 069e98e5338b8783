// Copyright 2026 The qfalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Machine definition files: a JSON document naming the machine type, the
// alphabet, the states, and one transition payload per tape symbol.
//
//   {
//     "type": "kwqfa-1way",
//     "alphabet": ["a", "b"],
//     "states": [{"name": "q0", "kind": "nonhalting", "direction": "right"}, ...],
//     "initial": "q0",
//     "transitions": {
//       "cent": {"sparse": [["q0", "q1", "1/sqrt(2)"], ["q0", "p1", "1/sqrt(2)"]]},
//       "a": {"matrix": [["1", "0"], ["0", "1"]]},
//       ...
//     }
//   }
//
// Payload keys are "cent", "dollar" or a letter. A payload is one of
//   {"matrix": rows}            every entry an amplitude expression,
//   {"sparse": [[from, to, amp], ...]}  unmentioned entries are zero,
//   {"kraus": [rows, rows, ...]}        rt-qfa only.
// For the unitary types (rt-kwqfa, kwqfa-1way, kwqfa-2way) the columns of a
// sparse payload that are never a `from` are produced by unitary completion,
// and a symbol with no payload is completed entirely. A gfa carries
// "initial_vector" and "final_vector" and has payloads for letters only.
// States of rt-pfa and rt-qfa machines are "accepting" or "rejecting".

#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "qfalab/classical.hpp"
#include "qfalab/quantum_rt.hpp"
#include "qfalab/twoway.hpp"

namespace qfa {

enum class MachineType { rt_pfa, gfa, rt_qfa, rt_kwqfa, kwqfa_1way, kwqfa_2way };

const char *to_string(MachineType t);
/// Throws ParseError on an unknown name.
MachineType parse_machine_type(std::string_view name);

using Machine = std::variant<RtPfa, Gfa, RtQfa, RtKwqfa, TwoWayKwqfa>;

struct MachineFile {
    MachineType type = MachineType::rt_pfa;
    Machine machine;
    /// The document the machine was built from. Amplitudes keep the spelling
    /// they were written with.
    nlohmann::ordered_json document;
};

/// Throws ParseError for malformed documents (syntax errors carry the byte
/// offset, structural errors the JSON pointer of the offending value), and
/// WellformednessError when specified unitary columns cannot be completed.
MachineFile parse_machine_file(std::string_view text, CompletionOrder order = CompletionOrder::ascending);

/// Reads and parses a file. Unreadable files raise InputError.
MachineFile load_machine_file(const std::string &path, CompletionOrder order = CompletionOrder::ascending);

/// Pretty-printed document, newline terminated.
std::string serialize_machine_file(const MachineFile &file);

/// Documents for in-memory machines. Entries print as 17 significant digits
/// (real) or "re + im*i" (complex), which reparse to the same doubles.
MachineFile to_machine_file(const RtPfa &m);
MachineFile to_machine_file(const Gfa &g);
MachineFile to_machine_file(const RtQfa &m);
MachineFile to_machine_file(const RtKwqfa &m);
MachineFile to_machine_file(const TwoWayKwqfa &m);

/// Decimal text that reparses to exactly `z`.
std::string format_amplitude(Complex z);

}  // namespace qfa
