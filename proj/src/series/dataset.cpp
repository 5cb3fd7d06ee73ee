#include "papseries/series/dataset.hpp"

#include <stdexcept>

namespace papseries {

namespace {

// Counting sequences s_0, s_1, ... of the sixteen Wilf classes of length-5
// patterns, keyed by class representative.
const std::vector<DatasetEntry> kEntries = {
    {"25314", "A256195",
     {
      "1", "1", "2", "6", "24", "119", "694", "4578", "33184", "258757", "2136978", "18478134", "165857600",
      "1535336290", "14584260700", "141603589300", "1400942032152", "14087464765300", "143689133196008",
      "1484090443264936", "15499968503875136", "163501005435759505", "1740170514634463426",
      "18671118911254798454", "201805434191401310152", "2195829593847519231848", "24039330044242839545400"
     }},
    {"31524", "A256196",
     {
      "1", "1", "2", "6", "24", "119", "694", "4579", "33216", "259401", "2147525", "18632512", "167969934",
      "1563027614", "14937175825", "146016423713", "1455402205257", "14753501614541", "151783381341695",
      "1582029822426003", "16681492660789425", "177726496203056670", "1911230701872865231",
      "20726637978574528119", "226497541235099049284", "2492440846906157577367"
     }},
    {"35214", "A256197",
     {
      "1", "1", "2", "6", "24", "119", "694", "4579", "33218", "259483", "2149558", "18672277", "168648090",
      "1573625606", "15093309024", "148223240022", "1485673163882", "15159644212775", "157142812302992",
      "1651865171372967", "17582693993265148", "189269329080075275", "2058215511081891400",
      "22589841589522026553", "250032335770049925668", "2788899325208909923567", "31329479505464363566868"
     }},
    {"43251", "A256203",
     {
      "1", "1", "2", "6", "24", "119", "694", "4581", "33283", "260805", "2171393", "18994464", "173094540",
      "1632480259", "15851668551", "157824649955", "1605839173312", "16652321922596", "175596537163347",
      "1879357191026029", "20382942631855557", "223719376672365073", "2482094083780961295",
      "27808544385768051233", "314346011323933283258", "3582440933577530273836", "41134198972534449502215",
      "475581766378016525358137"
     }},
    {"34215", "A256205",
     {
      "1", "1", "2", "6", "24", "119", "694", "4581", "33285", "260886", "2173374", "19032746", "173741467",
      "1642533692", "15999488304", "159917206735", "1634681988983", "17042352950764", "180798150762914",
      "1948027746498015", "21282786390947602", "235446451502773103", "2634317655935012208",
      "29778833170013213300", "339796984870771392635", "3910755764784092153311", "45365839293606522375359",
      "530098601158553050947014"
     }},
    {"53124", "A256199",
     {
      "1", "1", "2", "6", "24", "119", "694", "4580", "33252", "260202", "2161837", "18858720", "171285237",
      "1609282391", "15561356705", "154246419725", "1562151687940", "16121960812335", "169178376076607",
      "1801800479418116", "19446010522240384", "212394673429250090", "2345064355131025130",
      "26148064110299271293", "294190661855648481179", "3337335970674441425688"
     }},
    {"32541", "A256204",
     {
      "1", "1", "2", "6", "24", "119", "694", "4581", "33284", "260847", "2172454", "19015582", "173461305",
      "1638327423", "15939733122", "159099927785", "1623799173782", "16900201391546", "178967276844263",
      "1924689980696921", "20987593594256974", "231734179050033660", "2587835777992844938",
      "29198736751160012102", "332575357468837097628", "3821024002600674745994", "44252507544177176282956"
     }},
    {"35124", "A256198",
     {
      "1", "1", "2", "6", "24", "119", "694", "4580", "33249", "260092", "2159381", "18815124", "170605392",
      "1599499163", "15427796984", "152487271455", "1539554179950", "15836801521762", "165625811815111",
      "1757953168747511", "18908510233855411", "205838673911323648", "2265393020812413370",
      "25182471016157568626", "282511039355447739772", "3196265588333257586119", "36445643066828928379492",
      "418600631627670270370879"
     }},
    {"31245", "A116485",
     {
      "1", "1", "2", "6", "24", "119", "694", "4581", "33286", "260927", "2174398", "19053058", "174094868",
      "1648198050", "16085475576", "161174636600", "1652590573612", "17292601075489", "184246699159418",
      "1995064785620557", "21919480341617102", "244015986016996763", "2749174129340156922",
      "31313478171012371344", "360255986786421416732", "4183070452633759090955", "48986523769015357032198",
      "578206680078321677926243"
     }},
    {"42351", "A256200",
     {
      "1", "1", "2", "6", "24", "119", "694", "4580", "33252", "260204", "2161930", "18861307", "171341565",
      "1610345257", "15579644765", "154541844196", "1566713947713", "16190122718865", "170171678529883",
      "1816001425551270", "19646035298044543", "215179180467834605", "2383465957654163227",
      "26673704385975326866", "301342110309622207830", "3434155564505269412223", "39453283522954708152659",
      "456668245606432017686247"
     }},
    {"42315", "A256206",
     {
      "1", "1", "2", "6", "24", "119", "694", "4581", "33287", "260967", "2175379", "19072271", "174426353",
      "1653484169", "16165513608", "162344264849", "1669261805697", "17526017429722", "187472773174466",
      "2039233971499931", "22520066337196663", "252141732452056894", "2858721279079666465",
      "32786666580814894741", "380034587229949049485", "4448342812221497172384", "52542550112506952504622"
     }},
    {"12345", "A047889",
     {
      "1", "1", "2", "6", "24", "119", "694", "4582", "33324", "261808", "2190688", "19318688", "178108704",
      "1705985883", "16891621166", "172188608886", "1801013405436", "19274897768196", "210573149141896",
      "2343553478425816", "26525044132374656", "304856947930144656", "3553266124166899872",
      "41952101272633801376", "501228159413699278144", "6054582181256780696704", "73884542290182291304704",
      "910193895170720544149248"
     }},
    {"35241", "A256201",
     {
      "1", "1", "2", "6", "24", "119", "694", "4580", "33254", "260285", "2163930", "18900534", "172016256",
      "1621031261", "15739870457", "156855197297", "1599233708733", "16638560125635", "176269571712376",
      "1898076560618372", "20742488003444465", "229747253093647567", "2576270755655436479",
      "29218474225923168362", "334868638387692996919", "3875365114838257507148", "45256353903547788096108"
     }},
    {"53241", "A256202",
     {
      "1", "1", "2", "6", "24", "119", "694", "4580", "33256", "260370", "2166120", "18945144", "172810050",
      "1633997788", "15939893003", "159820729208", "1641980432159", "17242378256155", "184674461615836",
      "2013829450204384", "22324460502429244", "251250502143635615", "2867467023751687892",
      "33152272498223444540", "387935538721724466875", "4590792008759551665335", "54901471673327772683658"
     }},
    {"53421", "A256207",
     {
      "1", "1", "2", "6", "24", "119", "694", "4582", "33325", "261853", "2191902", "19344408", "178582940",
      "1713999264", "17019444969", "174149184184", "1830279810276", "19703572779755", "216769635980879",
      "2432308876304981", "27788506478197951", "322770995262901091", "3806657237502632706",
      "45532086120583546634", "551794232925251495478", "6769119579399164598190", "83991144346393508063125"
     }},
    {"52341", "A256208",
     {
      "1", "1", "2", "6", "24", "119", "694", "4582", "33325", "261863", "2192390", "19358590", "178904675",
      "1720317763", "17132629082", "176055309619", "1861037944163", "20185165186517", "224150069984572",
      "2543698932578158", "29451619807433107", "347417296695040510", "4170088041714300134",
      "50874753262007210667"
     }},
};

}  // namespace

const std::vector<DatasetEntry>& dataset_entries() { return kEntries; }

ExactSeries dataset_series(std::string_view key) {
  for (const auto& e : kEntries) {
    if (e.representative != key && e.oeis != key) continue;
    ExactSeries s;
    s.name = "Av(" + std::string(e.representative) + ")";
    s.oeis = std::string(e.oeis);
    for (auto c : e.coefficients) s.coeffs.emplace_back(std::string(c));
    return s;
  }
  throw std::out_of_range("no embedded series for '" + std::string(key) + "'");
}

std::vector<ExactSeries> dataset() {
  std::vector<ExactSeries> out;
  for (const auto& e : kEntries) out.push_back(dataset_series(e.representative));
  return out;
}

}  // namespace papseries
