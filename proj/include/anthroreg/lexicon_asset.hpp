#pragma once

#include <string_view>

namespace anthroreg::assets {

// Marker lexicon, one record per pattern: rule, surface, case_sensitive.
// An apostrophe in a surface also matches U+2019. Spaces match between words.
// Record order within a rule is the published table order.
inline constexpr std::string_view kLexiconTsv = R"tsv(# anthroreg marker lexicon v1
# rule	surface	case_sensitive
R1	I	1
R1	me	0
R1	my	0
R1	mine	0
R1	myself	0
R1	we	0
R1	us	0
R1	our	0
R1	ours	0
R1	ourselves	0
R1	let's	0
R2	unfortunately	0
R2	fortunately	0
R2	interestingly	0
R2	surprisingly	0
R2	happily	0
R2	sadly	0
R2	exciting	0
R2	glad	0
R2	happy to	0
R2	sorry	0
R2	apologize	0
R2	wonderful	0
R2	fantastic	0
R2	excellent	0
R2	amazing	0
R2	great question	0
R2	great!	0
R3	it seems	0
R3	it appears	0
R3	it looks like	0
R3	apparently	0
R3	arguably	0
R3	perhaps	0
R3	maybe	0
R3	not sure	0
R3	might be	0
R3	could be	0
R3	it's possible	0
R4	would be better	0
R4	it's better to	0
R4	good approach	0
R4	best approach	0
R4	recommend	0
R4	suggest	0
R4	might be worth	0
R4	should consider	0
R4	ideally	0
R4	a good idea	0
R5	as mentioned	0
R5	as noted	0
R5	as discussed	0
R5	as said	0
R5	as explained	0
R5	as described	0
R5	earlier	0
R5	previously	0
R5	recall that	0
R5	remember that	0
R6	so the issue is	0
R6	so the problem is	0
R6	the thing is	0
R6	here's what	0
R6	here's the	0
R6	basically	0
R6	what's happening	0
R6	let me explain	0
R6	to put it simply	0
R7	hi there	0
R7	hey there	0
R7	happy to help	0
R7	glad to help	0
R7	feel free	0
R7	let me know	0
R7	hope this helps	0
R7	good luck	0
R7	cheers	0
R7	you're welcome	0
R7	how can I help	0
R7	have a good	0
R7	have a great	0
R7	have a nice	0
)tsv";

}  // namespace anthroreg::assets
