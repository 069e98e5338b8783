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

#include "qfalab/machine_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qfalab/amp_expr.hpp"
#include "qfalab/errors.hpp"

namespace qfa {

namespace {

using Json = nlohmann::ordered_json;

struct TypeName {
    MachineType type;
    const char *name;
};

constexpr TypeName kTypeNames[] = {
    {MachineType::rt_pfa, "rt-pfa"},         {MachineType::gfa, "gfa"},
    {MachineType::rt_qfa, "rt-qfa"},         {MachineType::rt_kwqfa, "rt-kwqfa"},
    {MachineType::kwqfa_1way, "kwqfa-1way"}, {MachineType::kwqfa_2way, "kwqfa-2way"},
};

[[noreturn]] void fail(const std::string &pointer, const std::string &message) {
    throw ParseError(message + " at " + (pointer.empty() ? std::string("/") : pointer));
}

const Json &field(const Json &obj, const char *key, const std::string &pointer) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(pointer, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

std::string child(const std::string &pointer, const std::string &key) {
    return pointer + "/" + key;
}

std::string child(const std::string &pointer, size_t index) {
    return pointer + "/" + std::to_string(index);
}

void only_fields(const Json &obj, std::initializer_list<const char *> allowed, const std::string &pointer) {
    if (!obj.is_object()) {
        fail(pointer, "expected an object");
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char *a : allowed) {
            known = known || it.key() == a;
        }
        if (!known) {
            fail(pointer, "unknown field \"" + it.key() + "\"");
        }
    }
}

const std::string &as_string(const Json &v, const std::string &pointer) {
    if (!v.is_string()) {
        fail(pointer, "expected a string");
    }
    return v.get_ref<const std::string &>();
}

const Json &as_array(const Json &v, const std::string &pointer, size_t expected = SIZE_MAX) {
    if (!v.is_array()) {
        fail(pointer, "expected an array");
    }
    if (expected != SIZE_MAX && v.size() != expected) {
        fail(pointer, "expected " + std::to_string(expected) + " entries, found " + std::to_string(v.size()));
    }
    return v;
}

Complex read_amp(const Json &v, const std::string &pointer) {
    if (v.is_number()) {
        return v.get<double>();
    }
    const std::string &text = as_string(v, pointer);
    try {
        return eval_amp(text);
    } catch (const ParseError &e) {
        fail(pointer, std::string("bad amplitude \"") + text + "\": " + e.what());
    } catch (const EvalError &e) {
        fail(pointer, std::string("bad amplitude \"") + text + "\": " + e.what());
    }
}

double read_real(const Json &v, const std::string &pointer) {
    Complex z = read_amp(v, pointer);
    if (z.imag() != 0) {
        fail(pointer, "expected a real value");
    }
    return z.real();
}

struct Header {
    MachineType type = MachineType::rt_pfa;
    Alphabet alphabet;
    std::vector<std::string> names;
    std::vector<StateKind> kinds;
    std::vector<Direction> directions;
    size_t initial = 0;
    std::map<std::string, size_t> index;

    size_t state(const Json &v, const std::string &pointer) const {
        const std::string &name = as_string(v, pointer);
        auto it = index.find(name);
        if (it == index.end()) {
            fail(pointer, "undefined state \"" + name + "\"");
        }
        return it->second;
    }
    size_t count() const {
        return names.size();
    }
};

bool is_kwqfa(MachineType t) {
    return t == MachineType::kwqfa_1way || t == MachineType::kwqfa_2way;
}

bool is_unitary_type(MachineType t) {
    return t == MachineType::rt_kwqfa || is_kwqfa(t);
}

Header read_header(const Json &doc) {
    Header h;
    h.type = parse_machine_type(as_string(field(doc, "type", ""), "/type"));

    std::string letters;
    const Json &alphabet = as_array(field(doc, "alphabet", ""), "/alphabet");
    for (size_t k = 0; k < alphabet.size(); ++k) {
        const std::string &letter = as_string(alphabet[k], child("/alphabet", k));
        if (letter.size() != 1) {
            fail(child("/alphabet", k), "alphabet symbols are single characters, got \"" + letter + "\"");
        }
        letters += letter;
    }
    try {
        h.alphabet = Alphabet(letters);
    } catch (const InputError &e) {
        fail("/alphabet", e.what());
    }

    const Json &states = as_array(field(doc, "states", ""), "/states");
    if (states.empty()) {
        fail("/states", "a machine needs at least one state");
    }
    for (size_t q = 0; q < states.size(); ++q) {
        const std::string pointer = child("/states", q);
        only_fields(states[q], {"name", "kind", "direction"}, pointer);
        const std::string &name = as_string(field(states[q], "name", pointer), child(pointer, "name"));
        if (!h.index.emplace(name, q).second) {
            fail(child(pointer, "name"), "duplicate state name \"" + name + "\"");
        }
        h.names.push_back(name);

        StateKind kind = StateKind::nonhalting;
        if (states[q].contains("kind")) {
            const std::string &k = as_string(states[q]["kind"], child(pointer, "kind"));
            if (k == "nonhalting") {
                kind = StateKind::nonhalting;
            } else if (k == "accepting") {
                kind = StateKind::accepting;
            } else if (k == "rejecting") {
                kind = StateKind::rejecting;
            } else {
                fail(child(pointer, "kind"), "unknown state kind \"" + k + "\"");
            }
        } else if (h.type != MachineType::gfa) {
            fail(pointer, "missing field \"kind\"");
        }
        h.kinds.push_back(kind);

        Direction dir = Direction::right;
        if (is_kwqfa(h.type)) {
            const std::string &d = as_string(field(states[q], "direction", pointer), child(pointer, "direction"));
            if (d == "left") {
                dir = Direction::left;
            } else if (d == "stay") {
                dir = Direction::stay;
            } else if (d == "right") {
                dir = Direction::right;
            } else {
                fail(child(pointer, "direction"), "unknown direction \"" + d + "\"");
            }
        } else if (states[q].contains("direction")) {
            fail(child(pointer, "direction"), std::string("direction is only meaningful for kwqfa types"));
        }
        h.directions.push_back(dir);
    }

    if (h.type != MachineType::gfa) {
        h.initial = h.state(field(doc, "initial", ""), "/initial");
    }
    return h;
}

ComplexMatrix read_dense(const Json &rows, size_t n, const std::string &pointer) {
    as_array(rows, pointer, n);
    const auto d = static_cast<Eigen::Index>(n);
    ComplexMatrix m(d, d);
    for (size_t i = 0; i < n; ++i) {
        const std::string row_pointer = child(pointer, i);
        const Json &row = as_array(rows[i], row_pointer, n);
        for (size_t j = 0; j < n; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = read_amp(row[j], child(row_pointer, j));
        }
    }
    return m;
}

struct Payload {
    ComplexMatrix matrix;
    std::vector<bool> specified;
    std::vector<ComplexMatrix> kraus;
};

Payload read_payload(const Json &p, const Header &h, const std::string &pointer) {
    const size_t n = h.count();
    const auto d = static_cast<Eigen::Index>(n);
    if (h.type == MachineType::rt_qfa) {
        only_fields(p, {"kraus"}, pointer);
        const std::string kp = child(pointer, "kraus");
        const Json &list = as_array(field(p, "kraus", pointer), kp);
        if (list.empty()) {
            fail(kp, "an operation needs at least one Kraus element");
        }
        Payload out;
        for (size_t k = 0; k < list.size(); ++k) {
            out.kraus.push_back(read_dense(list[k], n, child(kp, k)));
        }
        return out;
    }
    only_fields(p, {"matrix", "sparse"}, pointer);
    if (p.contains("matrix") == p.contains("sparse")) {
        fail(pointer, "expected exactly one of \"matrix\" or \"sparse\"");
    }
    Payload out;
    if (p.contains("matrix")) {
        out.matrix = read_dense(p["matrix"], n, child(pointer, "matrix"));
        out.specified.assign(n, true);
        return out;
    }
    const std::string sp = child(pointer, "sparse");
    const Json &entries = as_array(p["sparse"], sp);
    out.matrix = ComplexMatrix::Zero(d, d);
    out.specified.assign(n, false);
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    for (size_t k = 0; k < entries.size(); ++k) {
        const std::string ep = child(sp, k);
        const Json &e = as_array(entries[k], ep, 3);
        const size_t from = h.state(e[0], child(ep, 0));
        const size_t to = h.state(e[1], child(ep, 1));
        if (seen[to][from]) {
            fail(ep, "duplicate entry " + h.names[from] + " -> " + h.names[to]);
        }
        seen[to][from] = true;
        out.matrix(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) = read_amp(e[2], child(ep, 2));
        out.specified[from] = true;
    }
    return out;
}

RealMatrix real_part(const ComplexMatrix &m, const std::string &pointer) {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    if (m.size() > 0 && m.imag().cwiseAbs().maxCoeff(&row, &col) != 0) {
        fail(pointer, "expected real entries, entry (" + std::to_string(row) + ", " + std::to_string(col) +
                          ") has imaginary part " + format_amplitude(Complex(m(row, col).imag(), 0)));
    }
    return m.real();
}

size_t symbol_index(const std::string &key, const Header &h, const std::string &pointer) {
    if (key == "cent" || key == "dollar") {
        if (h.type == MachineType::gfa) {
            fail(pointer, "a gfa has no end-marker transitions");
        }
        return key == "cent" ? Alphabet::cent() : h.alphabet.dollar();
    }
    if (key.size() != 1 || h.alphabet.letters().find(key[0]) == std::string::npos) {
        fail(pointer, "\"" + key + "\" is not a tape symbol of this machine");
    }
    return h.alphabet.tape_index(key[0]);
}

MachineFile build(Json doc, CompletionOrder order) {
    only_fields(doc, {"type", "description", "alphabet", "states", "initial", "transitions", "initial_vector",
                      "final_vector"},
                "");
    Header h = read_header(doc);
    const size_t n = h.count();
    const auto d = static_cast<Eigen::Index>(n);

    const Json &transitions = field(doc, "transitions", "");
    if (!transitions.is_object()) {
        fail("/transitions", "expected an object");
    }
    std::map<size_t, Payload> payloads;
    for (auto it = transitions.begin(); it != transitions.end(); ++it) {
        const std::string pointer = child("/transitions", it.key());
        payloads[symbol_index(it.key(), h, pointer)] = read_payload(it.value(), h, pointer);
    }
    const size_t first = h.type == MachineType::gfa ? 1 : 0;
    const size_t last = h.type == MachineType::gfa ? h.alphabet.size() : h.alphabet.dollar();
    if (!is_unitary_type(h.type)) {
        for (size_t s = first; s <= last; ++s) {
            if (!payloads.count(s)) {
                fail("/transitions", "no transition for symbol \"" + h.alphabet.tape_symbol_name(s) + "\"");
            }
        }
    }
    if (h.type != MachineType::gfa && (doc.contains("initial_vector") || doc.contains("final_vector"))) {
        fail("", "initial_vector and final_vector belong to gfa machines");
    }

    MachineFile out;
    out.type = h.type;
    switch (h.type) {
        case MachineType::rt_pfa: {
            RtPfa m;
            m.state_count = n;
            m.alphabet = h.alphabet;
            m.initial = h.initial;
            m.state_names = h.names;
            for (StateKind k : h.kinds) {
                m.accepting.push_back(k == StateKind::accepting);
            }
            for (size_t s = first; s <= last; ++s) {
                m.transitions.push_back(
                    real_part(payloads[s].matrix, child("/transitions", h.alphabet.tape_symbol_name(s))));
            }
            out.machine = std::move(m);
            break;
        }
        case MachineType::gfa: {
            Gfa g;
            g.state_count = n;
            g.alphabet = h.alphabet;
            g.initial.resize(d);
            g.final.resize(d);
            const Json &iv = as_array(field(doc, "initial_vector", ""), "/initial_vector", n);
            const Json &fv = as_array(field(doc, "final_vector", ""), "/final_vector", n);
            for (size_t i = 0; i < n; ++i) {
                g.initial(static_cast<Eigen::Index>(i)) = read_real(iv[i], child("/initial_vector", i));
                g.final(static_cast<Eigen::Index>(i)) = read_real(fv[i], child("/final_vector", i));
            }
            for (size_t s = first; s <= last; ++s) {
                g.transitions.push_back(
                    real_part(payloads[s].matrix, child("/transitions", h.alphabet.tape_symbol_name(s))));
            }
            out.machine = std::move(g);
            break;
        }
        case MachineType::rt_qfa: {
            RtQfa m;
            m.state_count = n;
            m.alphabet = h.alphabet;
            m.initial = h.initial;
            m.state_names = h.names;
            for (StateKind k : h.kinds) {
                m.accepting.push_back(k == StateKind::accepting);
            }
            for (size_t s = first; s <= last; ++s) {
                m.operations.push_back(SuperOp{payloads[s].kraus});
            }
            out.machine = std::move(m);
            break;
        }
        case MachineType::rt_kwqfa:
        case MachineType::kwqfa_1way:
        case MachineType::kwqfa_2way: {
            std::vector<ComplexMatrix> unitaries;
            std::vector<std::vector<bool>> specified;
            for (size_t s = first; s <= last; ++s) {
                auto it = payloads.find(s);
                Payload p = it != payloads.end() ? it->second
                                                 : Payload{ComplexMatrix::Zero(d, d), std::vector<bool>(n, false), {}};
                bool complete = true;
                for (bool b : p.specified) {
                    complete = complete && b;
                }
                if (complete) {
                    unitaries.push_back(p.matrix);
                } else {
                    try {
                        unitaries.push_back(complete_partial_unitary(p.matrix, p.specified, order));
                    } catch (const WellformednessError &e) {
                        throw WellformednessError("transitions for \"" + h.alphabet.tape_symbol_name(s) +
                                                  "\": " + e.what());
                    }
                }
                specified.push_back(std::move(p.specified));
            }
            if (h.type == MachineType::rt_kwqfa) {
                out.machine = RtKwqfa{n, h.alphabet, std::move(unitaries), h.initial, h.kinds, h.names};
            } else {
                TwoWayKwqfa m;
                m.state_count = n;
                m.alphabet = h.alphabet;
                m.unitaries = std::move(unitaries);
                m.specified = std::move(specified);
                m.directions = h.directions;
                m.initial = h.initial;
                m.kinds = h.kinds;
                m.state_names = h.names;
                out.machine = std::move(m);
            }
            break;
        }
    }
    out.document = std::move(doc);
    return out;
}

Json dense_json(const ComplexMatrix &m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(format_amplitude(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json header_json(MachineType type, const Alphabet &alphabet) {
    Json doc;
    doc["type"] = to_string(type);
    Json letters = Json::array();
    for (char c : alphabet.letters()) {
        letters.push_back(std::string(1, c));
    }
    doc["alphabet"] = std::move(letters);
    return doc;
}

std::string name_or_default(const std::vector<std::string> &names, size_t q) {
    return q < names.size() ? names[q] : "s" + std::to_string(q + 1);
}

Json state_json(const std::string &name, StateKind kind) {
    Json s;
    s["name"] = name;
    s["kind"] = to_string(kind);
    return s;
}

MachineFile reparse(const Json &doc) {
    return build(doc, CompletionOrder::ascending);
}

}  // namespace

const char *to_string(MachineType t) {
    for (const auto &entry : kTypeNames) {
        if (entry.type == t) {
            return entry.name;
        }
    }
    return "?";
}

MachineType parse_machine_type(std::string_view name) {
    for (const auto &entry : kTypeNames) {
        if (name == entry.name) {
            return entry.type;
        }
    }
    throw ParseError("unknown machine type \"" + std::string(name) + "\" at /type");
}

std::string format_amplitude(Complex z) {
    char re[40];
    std::snprintf(re, sizeof re, "%.17g", z.real());
    if (z.imag() == 0 && !std::signbit(z.imag())) {
        return re;
    }
    char im[40];
    std::snprintf(im, sizeof im, "%.17g", std::abs(z.imag()));
    return std::string(re) + (std::signbit(z.imag()) ? " - " : " + ") + im + "*i";
}

MachineFile parse_machine_file(std::string_view text, CompletionOrder order) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
    return build(std::move(doc), order);
}

MachineFile load_machine_file(const std::string &path, CompletionOrder order) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read machine file \"" + path + "\"");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_machine_file(buffer.str(), order);
}

std::string serialize_machine_file(const MachineFile &file) {
    return file.document.dump(2) + "\n";
}

MachineFile to_machine_file(const RtPfa &m) {
    Json doc = header_json(MachineType::rt_pfa, m.alphabet);
    Json states = Json::array();
    for (size_t q = 0; q < m.state_count; ++q) {
        states.push_back(state_json(name_or_default(m.state_names, q),
                                    m.accepting[q] ? StateKind::accepting : StateKind::rejecting));
    }
    doc["states"] = std::move(states);
    doc["initial"] = name_or_default(m.state_names, m.initial);
    Json transitions = Json::object();
    for (size_t s = 0; s < m.alphabet.tape_size(); ++s) {
        transitions[m.alphabet.tape_symbol_name(s)]["matrix"] = dense_json(m.transitions[s].cast<Complex>());
    }
    doc["transitions"] = std::move(transitions);
    return reparse(doc);
}

MachineFile to_machine_file(const Gfa &g) {
    Json doc = header_json(MachineType::gfa, g.alphabet);
    Json states = Json::array();
    Json iv = Json::array();
    Json fv = Json::array();
    for (size_t q = 0; q < g.state_count; ++q) {
        Json s;
        s["name"] = "g" + std::to_string(q + 1);
        states.push_back(std::move(s));
        iv.push_back(format_amplitude(g.initial(static_cast<Eigen::Index>(q))));
        fv.push_back(format_amplitude(g.final(static_cast<Eigen::Index>(q))));
    }
    doc["states"] = std::move(states);
    doc["initial_vector"] = std::move(iv);
    doc["final_vector"] = std::move(fv);
    Json transitions = Json::object();
    for (size_t k = 0; k < g.alphabet.size(); ++k) {
        transitions[std::string(1, g.alphabet.letters()[k])]["matrix"] = dense_json(g.transitions[k].cast<Complex>());
    }
    doc["transitions"] = std::move(transitions);
    return reparse(doc);
}

MachineFile to_machine_file(const RtQfa &m) {
    Json doc = header_json(MachineType::rt_qfa, m.alphabet);
    Json states = Json::array();
    for (size_t q = 0; q < m.state_count; ++q) {
        states.push_back(state_json(name_or_default(m.state_names, q),
                                    m.accepting[q] ? StateKind::accepting : StateKind::rejecting));
    }
    doc["states"] = std::move(states);
    doc["initial"] = name_or_default(m.state_names, m.initial);
    Json transitions = Json::object();
    for (size_t s = 0; s < m.alphabet.tape_size(); ++s) {
        Json kraus = Json::array();
        for (const ComplexMatrix &e : m.operations[s].kraus) {
            kraus.push_back(dense_json(e));
        }
        transitions[m.alphabet.tape_symbol_name(s)]["kraus"] = std::move(kraus);
    }
    doc["transitions"] = std::move(transitions);
    return reparse(doc);
}

MachineFile to_machine_file(const RtKwqfa &m) {
    Json doc = header_json(MachineType::rt_kwqfa, m.alphabet);
    Json states = Json::array();
    for (size_t q = 0; q < m.state_count; ++q) {
        states.push_back(state_json(name_or_default(m.state_names, q), m.kinds[q]));
    }
    doc["states"] = std::move(states);
    doc["initial"] = name_or_default(m.state_names, m.initial);
    Json transitions = Json::object();
    for (size_t s = 0; s < m.alphabet.tape_size(); ++s) {
        transitions[m.alphabet.tape_symbol_name(s)]["matrix"] = dense_json(m.unitaries[s]);
    }
    doc["transitions"] = std::move(transitions);
    return reparse(doc);
}

MachineFile to_machine_file(const TwoWayKwqfa &m) {
    Json doc = header_json(m.one_way() ? MachineType::kwqfa_1way : MachineType::kwqfa_2way, m.alphabet);
    Json states = Json::array();
    for (size_t q = 0; q < m.state_count; ++q) {
        Json s = state_json(m.state_name(q), m.kinds[q]);
        s["direction"] = to_string(m.directions[q]);
        states.push_back(std::move(s));
    }
    doc["states"] = std::move(states);
    doc["initial"] = m.state_name(m.initial);
    Json transitions = Json::object();
    for (size_t s = 0; s < m.alphabet.tape_size(); ++s) {
        transitions[m.alphabet.tape_symbol_name(s)]["matrix"] = dense_json(m.unitaries[s]);
    }
    doc["transitions"] = std::move(transitions);
    return reparse(doc);
}

}  // namespace qfa
