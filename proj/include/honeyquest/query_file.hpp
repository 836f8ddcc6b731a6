#pragma once

#include <string>
#include <string_view>

#include "honeyquest/model.hpp"

namespace honeyquest {

// Query file layout:
//
//   id: <slug>
//   type: filesystem|htaccess|httpheaders|networkrequests
//   label: neutral|risky|deceptive
//   technique: <technique name>        (optional)
//   risk: <risk id>                    (optional)
//   risk-class: vulnerability|weakness|attack   (optional)
//   risky-lines: 3,5                   (optional)
//   deceptive-lines: 4                 (optional)
//   source: <free text>                (optional)
//   ---
//   <verbatim query lines, each terminated by '\n'>
//
// serialize_query() emits exactly this key order and omits absent fields.

Query parse_query(std::string_view text);
std::string serialize_query(const Query& q);

}  // namespace honeyquest
