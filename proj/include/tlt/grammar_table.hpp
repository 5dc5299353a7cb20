#pragma once

#include <string_view>

namespace tlt {

// Declarative rule inventory, one row per grammar rule.
//
// Columns: name | result kind | argument kinds (comma separated, "-" for none)
//          | value semantics | twin rule ("-" for none) | origin | note
//
// origin:
//   original  present in the source grammar and kept unchanged
//   added     introduced by the disambiguated grammar (string twins, hop_first)
//   legacy    accepted only when reading LFs written in the source grammar
//
// A note starting with "?" flags a row whose argument kinds are a reconstruction
// rather than a verbatim transcription.
inline constexpr std::string_view kGrammarTable = R"(
# Stat: boolean statements, the root of every LF
and               Stat  Stat,Stat    agnostic  -                 original
only              Stat  View         agnostic  -                 original
eq                Stat  Obj,Obj      numeric   str_eq            original  ? Obj slots also take N subtrees and V leaves
str_eq            Stat  Obj,Obj      string    eq                added     ? Obj slots also take N subtrees and V leaves
not_eq            Stat  Obj,Obj      numeric   not_str_eq        original  ? Obj slots also take N subtrees and V leaves
not_str_eq        Stat  Obj,Obj      string    not_eq            added     ? Obj slots also take N subtrees and V leaves
round_eq          Stat  Obj,Obj      numeric   -                 original  ? Obj slots also take N subtrees and V leaves
greater           Stat  Obj,Obj      numeric   -                 original  ? Obj slots also take N subtrees and V leaves
less              Stat  Obj,Obj      numeric   -                 original  ? Obj slots also take N subtrees and V leaves
all_eq            Stat  View,C,V     numeric   all_str_eq        original
all_str_eq        Stat  View,C,V     string    all_eq            added
all_not_eq        Stat  View,C,V     numeric   all_str_not_eq    original
all_str_not_eq    Stat  View,C,V     string    all_not_eq        added
all_greater       Stat  View,C,V     numeric   -                 original
all_greater_eq    Stat  View,C,V     numeric   -                 original
all_less          Stat  View,C,V     numeric   -                 original
all_less_eq       Stat  View,C,V     numeric   -                 original
most_eq           Stat  View,C,V     numeric   most_str_eq       original
most_str_eq       Stat  View,C,V     string    most_eq           added
most_not_eq       Stat  View,C,V     numeric   most_str_not_eq   original
most_str_not_eq   Stat  View,C,V     string    most_not_eq       added
most_greater      Stat  View,C,V     numeric   -                 original
most_greater_eq   Stat  View,C,V     numeric   -                 original
most_less         Stat  View,C,V     numeric   -                 original
most_less_eq      Stat  View,C,V     numeric   -                 original

# View: sets of rows
all_rows          View  -            agnostic  -                 original
filter_all        View  View,C       agnostic  -                 original
filter_eq         View  View,C,V     numeric   filter_str_eq     original
filter_str_eq     View  View,C,V     string    filter_eq         added
filter_not_eq     View  View,C,V     numeric   filter_str_not_eq original
filter_str_not_eq View  View,C,V     string    filter_not_eq     added
filter_greater    View  View,C,V     numeric   -                 original
filter_greater_eq View  View,C,V     numeric   -                 original
filter_less       View  View,C,V     numeric   -                 original
filter_less_eq    View  View,C,V     numeric   -                 original

# N: numeric results
count             N     View         agnostic  -                 original
sum               N     View,C       numeric   -                 original
avg               N     View,C       numeric   -                 original
max               N     View,C       numeric   -                 original
min               N     View,C       numeric   -                 original
nth_max           N     View,C,I     numeric   -                 original
nth_min           N     View,C,I     numeric   -                 original
diff              N     Obj,Obj      numeric   -                 original  ? result kind reconstructed as N

# Row: single rows
argmax            Row   View,C       numeric   -                 original
argmin            Row   View,C       numeric   -                 original
nth_argmax        Row   View,C,I     numeric   -                 original
nth_argmin        Row   View,C,I     numeric   -                 original

# Obj: values extracted from rows
str_hop           Obj   Row,C        string    num_hop           added     renamed from the source grammar's hop
num_hop           Obj   Row,C        numeric   str_hop           original
str_hop_first     Obj   View,C       string    num_hop_first     added
num_hop_first     Obj   View,C       numeric   str_hop_first     added

# Source-grammar spelling of str_hop; its first argument may be a View there.
hop               Obj   Row,C        string    -                 legacy
)";

}  // namespace tlt
