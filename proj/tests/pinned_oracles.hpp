#pragma once

// Generated by tools/pin_oracles.py (mpmath, 256-bit). Do not edit.

namespace pinned {

// mu_hat(2 pi phi^(4+n)) for the maps t/phi +- 1, n = 0..25
inline constexpr double kGoldenWitness[26] = {
    0.000638166713594861762385755023972,
    0.00053845654356869154986298729727,
    0.000505783698519146900601495587778,
    0.000493986685039708299441015701004,
    0.000489575093840304436944636816484,
    0.000487903525101807713692532857622,
    0.000487266998676337138956200662477,
    0.000487024151769252029753136436959,
    0.000486931433974560125586738491667,
    0.000486896024976148245573344102376,
    0.000486882500824481982495083296216,
    0.000486877335186920630779493744196,
    0.000486875362107723289869518603079,
    0.000486874608461271981404441276143,
    0.00048687432059434278033398271192,
    0.000486874210639018377663438495665,
    0.000486874168639830207915083624077,
    0.000486874152597569068281383875365,
    0.000486874146469970750447270489939,
    0.000486874144129436488864086076435,
    0.000486874143235431956627976460818,
    0.000486874142893952611972674851557,
    0.000486874142763519108852448451967,
    0.000486874142713697943944209686476,
    0.000486874142694667952310122742911,
    0.000486874142687399142311782526793,
};
inline constexpr double kGoldenWitnessMin = 0.000486874142687399142311782526793;

// mu_hat(2 pi 2.5^n) for the maps 2t/5 +- 1, n = 0..25
inline constexpr double kFortyPercent[26] = {
    -0.392795058691149843472385078535,
    0.392795058691149843472385078535,
    -4.11248725389157716028409789591e-77,
    2.90796762476997716516510992232e-77,
    2.68661176973044344479784789354e-77,
    -1.49260152694234837952665357181e-77,
    -9.46896384624628387673198621264e-78,
    5.64065517747290784393121355852e-78,
    4.08522805821984245382254093771e-78,
    -1.32896673316897104018828775003e-78,
    5.70635150467982211313061183347e-80,
    3.57931934116386577149730296537e-80,
    -2.54025134158367532499869434685e-79,
    1.93743085473077808740201785166e-79,
    1.90346358213382153739881777946e-79,
    -1.69808133235580622997778780581e-79,
    1.56486900367825970205431074097e-79,
    1.31412015500318496952979056627e-79,
    1.78072368377216725972358134613e-80,
    3.07468043966052374199714635518e-80,
    1.35626547245045500571014052527e-80,
    -1.27090211758070239765137566829e-80,
    9.88947531784774086738828639363e-81,
    -9.80992560437762501079205587464e-81,
    -3.06078355249302170169537506616e-81,
    -3.06068879946387063856344153018e-81,
};

// mu_hat(2 pi phi^5), contraction 1/phi
inline constexpr double kGoldenAtPhi5 = 0.00053845654356869154986298729727;

// mu_hat(xi) for contraction 0.3 at xi = 1, 7.5, -42.25
inline constexpr double kPointThree[3] = {0.513875531349870205704477408139, -0.166185633358846273561834739707, 0.0492738077761631543107670507691};

// Lucas numbers L_0..L_60
inline constexpr long long kLucas[61] = {
    2LL,
    1LL,
    3LL,
    4LL,
    7LL,
    11LL,
    18LL,
    29LL,
    47LL,
    76LL,
    123LL,
    199LL,
    322LL,
    521LL,
    843LL,
    1364LL,
    2207LL,
    3571LL,
    5778LL,
    9349LL,
    15127LL,
    24476LL,
    39603LL,
    64079LL,
    103682LL,
    167761LL,
    271443LL,
    439204LL,
    710647LL,
    1149851LL,
    1860498LL,
    3010349LL,
    4870847LL,
    7881196LL,
    12752043LL,
    20633239LL,
    33385282LL,
    54018521LL,
    87403803LL,
    141422324LL,
    228826127LL,
    370248451LL,
    599074578LL,
    969323029LL,
    1568397607LL,
    2537720636LL,
    4106118243LL,
    6643838879LL,
    10749957122LL,
    17393796001LL,
    28143753123LL,
    45537549124LL,
    73681302247LL,
    119218851371LL,
    192900153618LL,
    312119004989LL,
    505019158607LL,
    817138163596LL,
    1322157322203LL,
    2139295485799LL,
    3461452808002LL,
};

}  // namespace pinned
