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

#include "qmv/cases/bitcoin.hpp"

#include <cmath>
#include <sstream>

#include "format.hpp"

namespace qmv::cases {

GeneratedCase gen_bitcoin(const BitcoinParams& p)
{
    if (!(p.M > 0.0 && p.M < 1.0)) throw ParameterError("M must lie strictly between 0 and 1");
    if (p.CD < 1) throw ParameterError("CD must be at least 1");
    if (p.DB && *p.DB < 1) throw ParameterError("DB must be at least 1");
    if (p.goal.empty()) throw ParameterError("goal predicate is empty");
    if (!(p.time_bound >= 0.0) || std::isinf(p.time_bound)) throw ParameterError("time bound must be finite");

    const std::string goal = "(" + p.goal + ")";
    std::ostringstream m;
    m << "// Trust attack on Bitcoin: the attacker restarts or continues its secret fork\n"
      << "// whenever the honest pool extends the public chain.\n"
      << "ma\n\n"
      << "const double M = " << detail::real(p.M) << ";\n"
      << "const int CD = " << p.CD << ";\n"
      << "const int DB = " << (p.DB ? std::to_string(*p.DB) : std::string("CD")) << ";\n\n"
      << "action sln, rst, cnt;\n\n"
      << "global m_len : [0..CD+1] init 0;\n"
      << "global m_diff : [-DB..CD+1] init 0;\n\n"
      << "module HonestPool\n"
      << "  h_mined : bool init false;\n"
      << "  rate(1/12 * (1 - M)) !h_mined & !" << goal << " -> (h_mined'=true);\n"
      << "  [sln] h_mined -> (h_mined'=false);\n"
      << "endmodule\n\n"
      << "module TrustAttacker\n"
      << "  a_decide : bool init false;\n"
      << "  rate((1/12) * M) !a_decide & !" << goal
      << " -> (m_len'=min(CD, m_len + 1)) & (m_diff'=m_diff + 1);\n"
      << "  [sln] !a_decide -> (m_diff'=m_diff - 1) & (a_decide'=true);\n"
      << "  [rst] a_decide -> (m_len'=0) & (m_diff'=0) & (a_decide'=false);\n"
      << "  [cnt] a_decide & m_diff > -DB -> (a_decide'=false);\n"
      << "endmodule\n\n"
      << "label \"goal\" = " << p.goal << ";\n";

    GeneratedCase out;
    out.name = "bitcoin";
    out.model = m.str();
    out.properties = "Tmin=? [ F \"goal\" ]\nPmax=? [ F<=" + detail::real(p.time_bound) + " \"goal\" ]\n";
    return out;
}

} // namespace qmv::cases
