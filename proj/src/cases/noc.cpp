/*
 * Copyright 2026 The qmv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qmv/cases/noc.hpp"

#include <sstream>
#include <string>

namespace qmv::cases {

namespace {

std::string v(const char* name, int router) { return std::string(name) + "_" + std::to_string(router); }

/// Assignments of router `i` for head destination `h` (0: no flit, 1: X neighbour,
/// 2: Y neighbour, 3: diagonal).
std::string router_update(int i, int h, const std::string& inject)
{
    const int xn = i ^ 1;
    const std::string loc = v("loc", i), hd = v("hd", i), tr = v("tr", i), rr = v("rr", i);
    const std::string arrive = "(" + v("ox", xn) + "=2 ? 1 : 0)";
    const std::string room = "(" + v("tr", xn) + " + (" + v("ox", i) + "=2 ? 1 : 0) < B)";
    std::string local_sent;   // local head leaves this cycle
    std::string transit_sent; // transit head leaves on Y this cycle
    std::string ox = "0";
    std::string oy;
    std::string rr_next;
    switch (h) {
    case 0:
        local_sent = "false";
        transit_sent = "(" + tr + ">0)";
        oy = "(" + tr + ">0 ? 1 : 0)";
        break;
    case 1:
        local_sent = "true";
        transit_sent = "(" + tr + ">0)";
        ox = "1";
        oy = "(" + tr + ">0 ? 1 : 0)";
        break;
    case 2:
        local_sent = "(" + tr + "=0 | " + rr + "=0)";
        transit_sent = "(" + tr + ">0 & " + rr + "=1)";
        oy = "1";
        rr_next = "(" + tr + ">0 ? 1-" + rr + " : " + rr + ")";
        break;
    default:
        local_sent = room;
        transit_sent = "(" + tr + ">0)";
        ox = "(" + room + " ? 2 : 0)";
        oy = "(" + tr + ">0 ? 1 : 0)";
        break;
    }
    std::ostringstream u;
    u << "(" << loc << "'=min(B, " << loc << " - (" << local_sent << " ? 1 : 0) + " << inject << "))";
    if (h != 0) u << " & (" << hd << "'=(" << local_sent << " ? 0 : " << h << "))";
    u << " & (" << tr << "'=" << tr << " - (" << transit_sent << " ? 1 : 0) + " << arrive << ")";
    u << " & (" << v("ox", i) << "'=" << ox << ")";
    u << " & (" << v("oy", i) << "'=" << oy << ")";
    if (!rr_next.empty()) u << " & (" << rr << "'=" << rr_next << ")";
    return u.str();
}

} // namespace

GeneratedCase gen_noc(const NocParams& p)
{
    if (p.buffer < 1) throw ParameterError("buffer capacity must be positive");
    if (p.k_res < 1 || p.k_res > 4) throw ParameterError("K_res must lie in 1..4");
    if (p.k_ind < 1) throw ParameterError("K_ind must be positive");
    if (p.events < 0) throw ParameterError("event count must be nonnegative");
    if (p.horizon < 0) throw ParameterError("horizon must be nonnegative");
    if (p.unfold && *p.unfold < 0) throw ParameterError("unfolding bound must be nonnegative");
    const bool bursty = p.pattern == FlitPattern::Bursty;
    if (bursty && (p.burst_period < 1 || p.burst_length < 1 || p.burst_length > p.burst_period)) {
        throw ParameterError("bursty pattern needs 1 <= burst length <= period");
    }
    const int period = bursty ? p.burst_period : 2;
    const std::string inject = bursty ? "(phase<L ? 1 : 0)" : "(phase=0 ? 1 : 0)";

    std::ostringstream m;
    m << "// 2x2 network-on-chip with counter buffers, XY routing and a noise-event monitor.\n"
      << "dtmc\n\n"
      << "const int B = " << p.buffer << ";\n"
      << "const int N = " << p.events << ";\n"
      << "const int T = " << p.horizon << ";\n"
      << "const int K_RES = " << p.k_res << ";\n"
      << "const int K_IND = " << p.k_ind << ";\n"
      << "const int P = " << period << ";\n";
    if (bursty) m << "const int L = " << p.burst_length << ";\n";
    m << "\nmodule gen\n"
      << "  phase : [0..P-1] init 0;\n";
    if (p.unfold) {
        m << "  clk : [0.." << *p.unfold << "] init 0;\n"
          << "  [tick] clk<" << *p.unfold << " -> (phase'=(phase + 1) % P) & (clk'=clk + 1);\n";
    } else {
        m << "  [tick] true -> (phase'=(phase + 1) % P);\n";
    }
    m << "endmodule\n";

    for (int i = 0; i < 4; ++i) {
        m << "\nmodule router" << i << "\n"
          << "  " << v("loc", i) << " : [0..B] init 0;\n"
          << "  " << v("hd", i) << " : [0..3] init 0;\n"
          << "  " << v("tr", i) << " : [0..B] init 0;\n"
          << "  " << v("rr", i) << " : [0..1] init 0;\n"
          << "  " << v("ox", i) << " : [0..2] init 0;\n"
          << "  " << v("oy", i) << " : [0..1] init 0;\n";
        const std::string loc = v("loc", i), hd = v("hd", i);
        m << "  [tick] " << loc << "=0 -> " << router_update(i, 0, inject) << ";\n";
        m << "  [tick] " << loc << ">0 & " << hd << "=0 -> ";
        for (int h = 1; h <= 3; ++h) m << (h > 1 ? " + " : "") << "1/3: " << router_update(i, h, inject);
        m << ";\n";
        for (int h = 1; h <= 3; ++h) {
            m << "  [tick] " << loc << ">0 & " << hd << "=" << h << " -> " << router_update(i, h, inject) << ";\n";
        }
        m << "endmodule\n";
    }

    std::string active;
    for (int i = 0; i < 4; ++i) {
        active += (i ? " + " : "") + std::string("((") + v("ox", i) + ">0 | " + v("oy", i) + ">0) ? 1 : 0)";
    }
    active = "(" + active + ")";
    const std::string resistive = "(" + active + " >= K_RES)";
    const std::string inductive = "(" + active + " - prev >= K_IND | prev - " + active + " >= K_IND)";
    std::string event;
    switch (p.kind) {
    case NoiseKind::Resistive: event = resistive; break;
    case NoiseKind::Inductive: event = inductive; break;
    case NoiseKind::Either: event = "(" + resistive + " | " + inductive + ")"; break;
    }
    m << "\nmodule monitor\n"
      << "  prev : [0..4] init 0;\n"
      << "  events : [0..N] init 0;\n"
      << "  [tick] true -> (events'=min(N, events + (" << event << " ? 1 : 0))) & (prev'=" << active << ");\n"
      << "endmodule\n\n"
      << "label \"noise\" = events >= N;\n"
      << "label \"empty\" = loc_0=0 & loc_1=0 & loc_2=0 & loc_3=0 & tr_0=0 & tr_1=0 & tr_2=0 & tr_3=0;\n";

    GeneratedCase out;
    out.name = "noc";
    out.model = m.str();
    out.properties = "Pmax=? [ F<=T \"noise\" ]\n";
    return out;
}

} // namespace qmv::cases
