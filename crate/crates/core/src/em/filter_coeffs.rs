//! Coefficients of the 201-point digital Hankel filter (Key, 2009).
//!
//! For `r > 0`: `int_0^inf f(l) J_n(l r) dl ~= sum_i f(BASE[i] / r) * Wn[i] / r`.

#![allow(clippy::excessive_precision, clippy::unreadable_literal)]

pub(crate) const BASE: [f64; 201] = [
    0.0006112527611295728,
    0.0006582011330626792,
    0.0007087554594672159,
    0.0007631927021868981,
    0.0008218110956199024,
    0.0008849317805958155,
    0.0009529005637454616,
    0.001026089812002297,
    0.00110490049261441,
    0.001189764369843323,
    0.001281146370384213,
    0.001379547130466501,
    0.001485505738589109,
    0.001599602688916441,
    0.001722463061515276,
    0.001854759946855503,
    0.001997218133335814,
    0.002150618078036461,
    0.002315800182452862,
    0.002493669396634629,
    0.002685200176953821,
    0.002891441824663527,
    0.003113524234494096,
    0.003352664084780651,
    0.00361017150303456,
    0.00388745724347613,
    0.004186040415850672,
    0.004507556807870229,
    0.004853767846875483,
    0.005226570249814254,
    0.005628006414404065,
    0.006060275608406676,
    0.006525746018315052,
    0.007026967723461506,
    0.007566686666625634,
    0.008147859697679989,
    0.008773670772690183,
    0.009447548397216066,
    0.01017318440937716,
    0.01095455420558538,
    0.01179593851975157,
    0.0127019468752835,
    0.01367754283835671,
    0.01472807121080859,
    0.01585928731163164,
    0.01707738850748481,
    0.01838904816496257,
    0.01980145221062947,
    0.02132233849911398,
    0.02296003920493998,
    0.0247235264703394,
    0.0266224615591274,
    0.02866724778592989,
    0.03086908751073575,
    0.03324004351101861,
    0.03579310506765532,
    0.03854225912669247,
    0.04150256692682124,
    0.04469024651236346,
    0.04812276158381668,
    0.05181891717272583,
    0.05579896266503613,
    0.06008470273734039,
    0.06469961681378547,
    0.06966898769808187,
    0.07502004008532698,
    0.08078208971247929,
    0.0869867039646039,
    0.09366787481677047,
    0.1008622050590664,
    0.108609108824958,
    0.1169510275215943,
    0.1259336623450285,
    0.1356062246541897,
    0.1460217055752807,
    0.1572371663136276,
    0.1693140507634552,
    0.182318522128221,
    0.1963218253956815,
    0.2114006776535105,
    0.2276376883838127,
    0.2451218120391174,
    0.2639488353792869,
    0.2842219022392174,
    0.3060520786022707,
    0.3295589610751891,
    0.3548713320980274,
    0.3821278654786651,
    0.4114778861171706,
    0.4430821880821678,
    0.4771139155210344,
    0.5137595112299984,
    0.5532197380808739,
    0.5957107789003212,
    0.6414654208273198,
    0.6907343306373547,
    0.7437874280201796,
    0.8009153643346592,
    0.8624311149420454,
    0.9286716938412872,
    1.0,
    1.07680680549622,
    1.159512896362974,
    1.248571377864284,
    1.344470156832053,
    1.447734614663324,
    1.558930485621915,
    1.678666956213205,
    1.807600002612004,
    1.946435984427591,
    2.095935514494364,
    2.256917625888753,
    2.430264259001381,
    2.616925093246914,
    2.817922749882108,
    3.034358394435675,
    3.267417769442918,
    3.518377690535413,
    3.788613041474606,
    4.079604306451588,
    4.392945680918757,
    4.730353805388542,
    5.093677170047323,
    5.484906241707685,
    5.906184368579528,
    6.359819522601831,
    6.848296943665372,
    7.374292754997836,
    7.940688624303139,
    8.550587550976035,
    9.207330865882248,
    9.91451653683741,
    10.67601888007134,
    11.49600978566695,
    12.37898157325731,
    13.32977160319577,
    14.35358877803146,
    15.45604207947845,
    16.64317129721834,
    17.92148011788406,
    19.29797175550276,
    20.7801873185992,
    22.37624712415386,
    24.0948951847541,
    25.94554711266131,
    27.9383417032365,
    30.08419648032392,
    32.39486750789821,
    34.88301379565316,
    37.56226665137786,
    40.44730436006738,
    43.5539325988975,
    46.89917102861648,
    50.50134653574537,
    54.38019363641357,
    58.55696259189233,
    63.05453582813728,
    67.89755329714343,
    73.11254746690634,
    78.72808867953015,
    84.77494167382795,
    91.28623412992303,
    98.29763815922249,
    105.8475657340557,
    113.9773791276396,
    122.7316175172651,
    132.1582409921502,
    142.3088933027569,
    153.239184791044,
    165.008997051689,
    177.6828109933644,
    191.3300600973533,
    206.0255108088307,
    221.8496721447841,
    238.8892367626087,
    257.2375559057747,
    276.9951508285525,
    298.2702635016372,
    321.1794496157137,
    345.848217131731,
    372.4117138761822,
    401.015467948384,
    431.816184996071,
    464.9826067271839,
    500.696435361204,
    539.1533290846429,
    580.5639739642864,
    625.1552381906738,
    673.1714149753277,
    724.8755609109528,
    780.5509371268035,
    840.5025611345947,
    905.0588778667341,
    974.5735590616712,
    1049.427440854279,
    1130.03061018637,
    1216.824651467729,
    1310.285065796017,
    1410.923875989213,
    1519.292431702289,
    1635.984429995926,
];

pub(crate) const J0_WEIGHTS: [f64; 201] = [
    0.1104702818216325,
    -0.3002860174042879,
    0.0,
    0.9304611998317738,
    -1.237989456789895,
    0.0,
    1.522782496923861,
    -1.481262207187227,
    0.0,
    1.200938682543965,
    -1.042356281617017,
    0.0,
    0.8186482154233182,
    -0.7837979439107681,
    0.0,
    1.072087935017888,
    -2.017973482744253,
    2.638551914228436,
    -2.91697381041714,
    2.932547717791041,
    -2.782030176901836,
    2.548634287940637,
    -2.286132540834447,
    2.028668029433413,
    -1.790466549754032,
    1.579778206432123,
    -1.395100794535786,
    1.236899777150533,
    -1.099633354001948,
    0.9829180606149369,
    -0.8808127495830721,
    0.793941732291194,
    -0.7166399975760631,
    0.6508052453577512,
    -0.590908776365098,
    0.5400346833052113,
    -0.4925062292020488,
    0.4525012829058494,
    -0.413928215127945,
    0.3820303825432799,
    -0.3500694920581675,
    0.3243907465091445,
    -0.2973991010648227,
    0.2766317890637754,
    -0.2534315625567141,
    0.2366617712595763,
    -0.2163875214294563,
    0.2029716420595088,
    -0.1849663778885546,
    0.1744470283910267,
    -0.158190178617123,
    0.1502386381629129,
    -0.1352956168139171,
    0.1296732438173242,
    -0.1156619860385481,
    0.1121981827706036,
    -0.09877037098650596,
    0.09735307747326948,
    -0.08418324552747586,
    0.08475347956447533,
    -0.07152829800825916,
    0.07407480907190452,
    -0.0604833687278039,
    0.06504162604072715,
    -0.05077074526100943,
    0.0574270623819205,
    -0.04215804851336973,
    0.05105276831205472,
    -0.0344540281601669,
    0.0457813905980996,
    -0.02749842403920171,
    0.04150734318146184,
    -0.02115449634951816,
    0.03815224456264026,
    -0.01530500719575409,
    0.03566006962242232,
    -0.009844572094042197,
    0.03398735588004622,
    -0.004669634342048067,
    0.03309505748308261,
    0.0003248775057265341,
    0.03294860285661111,
    0.005240451270870069,
    0.03352191931272241,
    0.01016839266998432,
    0.03479748010810809,
    0.01518640694860538,
    0.03675989077470884,
    0.02035623099573585,
    0.03938537294158406,
    0.02571720552065411,
    0.04262879025301092,
    0.03127265047233792,
    0.04640586621922704,
    0.03696789312241264,
    0.05056664152720505,
    0.04265736230160079,
    0.05485681544583107,
    0.04805697373905592,
    0.05886326726197704,
    0.0526793423779762,
    0.06194081754102766,
    0.05575263672089661,
    0.06312348308951768,
    0.05613171205140025,
    0.06103877063939782,
    0.05223073389072554,
    0.05387340754058757,
    0.04205003959253396,
    0.03949537291826706,
    0.02344464896766128,
    0.01592975900866907,
    -0.005112454956546657,
    -0.01750424757311479,
    -0.04293028583599693,
    -0.05806536835195215,
    -0.08443837687273714,
    -0.09651641994648259,
    -0.1160353562902818,
    -0.1145716151033802,
    -0.1152746912280352,
    -0.08753115163764941,
    -0.0591736760131237,
    -0.0006660378399098311,
    0.049664944833619,
    0.1157206357429209,
    0.1448966611107768,
    0.1588998330585965,
    0.1031590212340854,
    0.02389465737393602,
    -0.1007600802615937,
    -0.1701081679147513,
    -0.1806596339730873,
    -0.05044220811489127,
    0.1067558829070489,
    0.2243843205181916,
    0.1124861192136151,
    -0.1060750025290042,
    -0.2494689576049384,
    -0.02532563907981785,
    0.2313093162590108,
    0.1265041517428334,
    -0.271689556450126,
    -0.05741673301698751,
    0.2828355798553848,
    -0.1151529184187685,
    -0.1895238214387882,
    0.3498981818372285,
    -0.3283594487966644,
    0.2228689935519562,
    -0.1191882703384384,
    0.04914136861200422,
    -0.01085046330669215,
    -0.006989673166059397,
    0.01396225098602933,
    -0.01583247654053119,
    0.01553798887482501,
    -0.01443534141636538,
    0.01310934487425667,
    -0.0117956256192321,
    0.01057909167982074,
    -0.00948212915526581,
    0.00850263634641782,
    -0.007630076138978968,
    0.006852043148244981,
    -0.006156761038065365,
    0.005533849408416496,
    -0.004974383010461074,
    0.004470699747473056,
    -0.004016161870832697,
    0.003604955260613827,
    -0.003231951863754572,
    0.002892630190613161,
    -0.002583034645430386,
    0.002299750969077188,
    -0.002039879838855092,
    0.001801000017171617,
    -0.001581121784044337,
    0.00137863789679707,
    -0.001192281463551114,
    0.001021096380613436,
    -0.0008644169540225837,
    0.0007218438967094129,
    -0.000593200632335106,
    0.0004784596555937276,
    -0.0003776406369869407,
    0.0002906937486164167,
    -0.0002173880970439557,
    0.0001572247021446439,
    -0.0001093880480994978,
    7.274278828090175e-05,
    -4.58750857933432e-05,
    2.717284254234203e-05,
    -1.493569664311702e-05,
    7.502072444202401e-06,
    -3.374980009202976e-06,
    1.323028566570774e-06,
    -4.342813347631881e-07,
    1.12052938922574e-07,
    -2.023679217396607e-08,
    1.923133952677995e-09,
];

pub(crate) const J1_WEIGHTS: [f64; 201] = [
    1.28963392714436e-05,
    -4.692852957012775e-05,
    5.712407500240781e-05,
    0.0,
    -5.4018983565044e-05,
    0.0,
    0.0001163813605855986,
    -0.0001341585158986474,
    0.0,
    0.0001563529882751311,
    -0.0001701932285008713,
    0.0,
    0.0002685212722282496,
    -0.0005148623386148907,
    0.0006653519984942213,
    -0.0007072232255490351,
    0.0006684047762347991,
    -0.0005847964888682289,
    0.0004877023048974497,
    -0.0003939313465485314,
    0.0003136345180982827,
    -0.0002470064062519923,
    0.0001953997902093073,
    -0.0001539602296158165,
    0.000123452983256531,
    -9.817008106125012e-05,
    8.058804362211881e-05,
    -6.451459975546781e-05,
    5.456430430893415e-05,
    -4.344419043404446e-05,
    3.815523049837875e-05,
    -2.949393655677912e-05,
    2.732187176767718e-05,
    -1.959842972127203e-05,
    1.982911726363689e-05,
    -1.20090479130296e-05,
    1.443251606646564e-05,
    -5.683761857979987e-06,
    1.04359455517734e-05,
    4.513240229146117e-08,
    7.457609318727016e-06,
    5.653216751529018e-06,
    5.308688404222969e-06,
    1.152796570665543e-05,
    3.932961600888582e-06,
    1.803352844385906e-05,
    3.380683574927984e-06,
    2.555716029426899e-05,
    3.803729181402945e-06,
    3.454895491783953e-05,
    5.466139820523614e-06,
    4.556234770039426e-05,
    8.768101084525483e-06,
    5.93009737933533e-05,
    1.428416302046287e-05,
    7.667672615961499e-05,
    2.281866040881824e-05,
    9.888436530447273e-05,
    3.548288867698162e-05,
    0.0001274995405373852,
    5.380041779170104e-05,
    0.0001646090070216299,
    7.984956415148433e-05,
    0.0002129842798716441,
    0.0001164554629053559,
    0.0002763133928114338,
    0.0001674485387417859,
    0.0003595100112861982,
    0.000238011827633985,
    0.000469125341707757,
    0.0003351463657538389,
    0.0006138970952511212,
    0.0004682919161509869,
    0.0008054805703670692,
    0.0006501519986304682,
    0.001059417913885959,
    0.0008977881651498095,
    0.001396414494631849,
    0.001234064772364374,
    0.001844009097024346,
    0.001689538327387063,
    0.002438744274863229,
    0.002304895516259244,
    0.003228952488337877,
    0.003134049181497694,
    0.004278260457055239,
    0.004247981356211152,
    0.005669864127830826,
    0.005739341687299852,
    0.007511500876566557,
    0.007727614768189288,
    0.009940768446104526,
    0.01036426807004136,
    0.01312987922331795,
    0.0138365214409302,
    0.01728788292640136,
    0.01836695924406547,
    0.02265651442167874,
    0.02420372071766719,
    0.02949262366900291,
    0.0315919163125884,
    0.03802499854417571,
    0.04071065391868849,
    0.04836588871048378,
    0.05155150426795294,
    0.06034835565661112,
    0.06370530818484274,
    0.0732537478760265,
    0.07602246037354336,
    0.08540182884134039,
    0.08613756797984258,
    0.0936304521200181,
    0.08994780552031496,
    0.09285438346694046,
    0.08138538169597652,
    0.07625701418518774,
    0.05331840281941071,
    0.03728410637826844,
    0.001088918303862871,
    -0.02482185562667677,
    -0.06966985038573692,
    -0.09508370436510773,
    -0.132045779687795,
    -0.1333188913518803,
    -0.134567983165602,
    -0.08403605511993056,
    -0.0327015330965538,
    0.06374700977990792,
    0.1243720031600276,
    0.1818967705583269,
    0.1375740652175917,
    0.05811873304105276,
    -0.1043087758627017,
    -0.1815595823147628,
    -0.1819917129979687,
    0.01631402693428312,
    0.175237563247441,
    0.2152308945759099,
    -0.06135834728025826,
    -0.2260012732339317,
    -0.1058818826360049,
    0.2751720328057493,
    0.07282078436121274,
    -0.2453904197631155,
    -0.02981552944151773,
    0.3295321158355015,
    -0.3395688755289581,
    0.1437347757121746,
    0.05569137331864311,
    -0.1618975349034848,
    0.1840881618330268,
    -0.163847565068553,
    0.1323098979187242,
    -0.1035844311836129,
    0.08132823321716304,
    -0.06502108525281801,
    0.05316632459343718,
    -0.0444148368962873,
    0.03779017256454915,
    -0.03263631595413427,
    0.02852104339616387,
    -0.02515785440611284,
    0.02235339482483744,
    -0.0199741604689476,
    0.01792574037444691,
    -0.01613980618851269,
    0.01456582802493779,
    -0.01316569266298338,
    0.01191013283575226,
    -0.01077631048875747,
    0.009746151537603939,
    -0.0088051798566843,
    0.007941688885035929,
    -0.00714614581153625,
    0.006410759357461669,
    -0.005729165010828318,
    0.005096195694120956,
    -0.004507714364593528,
    0.003960490050623528,
    -0.003452101711144719,
    0.002980856037463172,
    -0.002545706551739226,
    0.002146162475389078,
    -0.001782177147988815,
    0.001454007747414243,
    -0.001162041366288416,
    0.0009065878213110874,
    -0.0006876473801626548,
    0.000504671833560319,
    -0.0003563489117729183,
    0.0002404501739881472,
    -0.0001537865721775565,
    9.230834105005988e-05,
    -5.136252914208434e-05,
    2.60831821218588e-05,
    -1.184499677743133e-05,
    4.678587718668116e-06,
    -1.544064223784288e-06,
    3.995921803021977e-07,
    -7.219416019819105e-08,
    6.844864105885603e-09,
];
