// Reference values of H_0^(1)(z) and H_1^(1)(z) computed with 150-digit
// arbitrary-precision arithmetic: (re z, im z, re H0, im H0, re H1, im H1).
// Arguments whose Hankel values underflow double precision are omitted.
pub const HANKEL_REFERENCE: &[(f64, f64, f64, f64, f64, f64)] = &[
    (0.05, 0.0, 0.9993750976494686, -1.9793110008172097, 0.0249921883137597, -12.78985517117497),
    (0.049750208263901294, 0.004991670832341408, 0.935439653753613, -1.9794598167751627, -1.2421018651125926, -12.72362524465534),
    (0.046053049700144254, 0.019470917115432525, 0.743854238595032, -1.9801409912778491, -4.918703470021484, -11.772997916208242),
    (0.03483533546735827, 0.035867804544976144, 0.4890777912923818, -1.9813007388957715, -9.083891688863119, -8.902011365057918),
    (0.01337494143122937, 0.04817790927085965, 0.1716430277645097, -1.9824042378489877, -12.211848385841337, -3.4171391042512167),
    (0.5, 0.0, 0.9384698072408129, -0.44451873350670656, 0.2422684576748739, -1.471472392670243),
    (0.4975020826390129, 0.04991670832341408, 0.8660726259740703, -0.4571160565729364, 0.11671586569820365, -1.4432685458262664),
    (0.46053049700144255, 0.19470917115432526, 0.6626700624653064, -0.497585849739411, -0.254623886944252, -1.2936762149846737),
    (0.3483533546735827, 0.3586780454497614, 0.4190983473103967, -0.5464238419502293, -0.6826517971808526, -0.9543152304060362),
    (0.13374941431229367, 0.4817790927085965, 0.1433198199488372, -0.5831313501996344, -1.0064954855588741, -0.36142546312537405),
    (1.0, 0.0, 0.7651976865579666, 0.08825696421567696, 0.4400505857449335, -0.7812128213002887),
    (0.9950041652780258, 0.09983341664682815, 0.6907412166597949, 0.044861210720297154, 0.35335161931123044, -0.748553479089273),
    (0.9210609940028851, 0.3894183423086505, 0.5037186887117643, -0.07223171744391253, 0.10605154224927509, -0.6426297781858452),
    (0.6967067093471654, 0.7173560908995228, 0.30868571046011245, -0.18576485395046102, -0.162243568801979, -0.4638822713504011),
    (0.26749882862458735, 0.963558185417193, 0.10427981158154372, -0.2581621225466256, -0.3551898002987883, -0.17458830533765488),
    (2.5, 0.0, -0.048383776468198, 0.4980703596152319, 0.49709410246427405, 0.1459181379667858),
    (2.4875104131950643, 0.2495835416170704, -0.013958691351514669, 0.38803531991284723, 0.3990219855891306, 0.08833568332777655),
    (2.3026524850072128, 0.9735458557716263, 0.05368362001620996, 0.17830840915515805, 0.20275227164988055, -0.028003852085419775),
    (1.7417667733679134, 1.793390227248807, 0.07004863438656572, 0.040951063388450594, 0.05539439771780723, -0.07479399081293732),
    (0.6687470715614684, 2.4088954635429825, 0.03104342075996177, -0.030505188651669173, -0.03453245342390422, -0.038036451709649165),
    (3.9, 0.0, -0.4018260148876399, 0.023375908198718962, -0.02724403962077989, 0.4078200195265379),
    (3.8805162445843004, 0.38935032492262983, -0.2697282242095905, 0.03437791538876006, 0.0014927591064720323, 0.27933430904772033),
    (3.5921378766112517, 1.518731535003737, -0.0738253096223929, 0.04642295249631662, 0.04065593649540946, 0.08300718663978815),
    (2.717156166453945, 2.797688754508139, 0.0013953408273509641, 0.024038946314292004, 0.026338672371754433, 0.00046072680846181253),
    (1.0432454316358908, 3.7578769231270526, 0.00844665142270024, -0.0035627790612504373, -0.0037191072465352962, -0.009551081380853312),
    (4.1, 0.0, -0.3886696798358537, -0.05609462660634448, -0.10327325774733857, 0.3845940348189166),
    (4.079517077639905, 0.4093170082519954, -0.25936672748861334, -0.019127028035197172, -0.05023064365220592, 0.2619038780426286),
    (3.7763500754118287, 1.596615203465467, -0.07324159237844133, 0.028912270207785636, 0.02256706669197853, 0.08007848138118519),
    (2.8564975083233777, 2.9411599726880433, -0.0016714103788140608, 0.0202987444039923, 0.021923358182577346, 0.003414083459286401),
    (1.096745197360808, 3.9505885602104907, 0.006946997241720283, -0.00249945994415547, -0.0025733470488690613, -0.007800194893388127),
    (6.0, 0.0, 0.15064525725099692, -0.28819468398157916, -0.27668385812756563, -0.17501034430039825),
    (5.970024991668154, 0.5990004998809689, 0.06977575813428127, -0.16407571035531082, -0.1602489243985532, -0.08398977719031483),
    (5.526365964017311, 2.336510053851903, -0.00587209575994763, -0.03064547910856586, -0.0321342476489171, 0.0038007178057350753),
    (4.1802402560829925, 4.304136545397137, -0.004281844339403268, 0.000689849771168473, 0.000495382814535751, 0.004574133527353362),
    (1.6049929717475242, 5.7813491125031575, 0.0009727185905397457, 0.00016172002032927845, 0.00019453537371857423, -0.0010448915852607514),
    (8.0, 0.0, 0.1716508071375539, 0.22352148938756622, 0.23463634685391463, -0.1580604617312475),
    (7.960033322224207, 0.7986673331746252, 0.08580031372626319, 0.0931048525153445, 0.09913865707182277, -0.08075603039246441),
    (7.368487952023081, 3.115346738469204, 0.01238544197817303, 0.0010707533660362382, 0.0017930815324438173, -0.012640953845607296),
    (5.573653674777323, 5.738848727196182, -0.00029445958183645625, -0.0008482215855673077, -0.0008983940931507859, 0.00027218265131914146),
    (2.139990628996699, 7.708465483337544, 9.543469387391363e-05, 8.052084499610937e-05, 8.676039704586304e-05, -9.97596736194626e-05),
    (10.0, 0.0, -0.24593576445134835, 0.055671167283599395, 0.04347274616886144, 0.24901542420695388),
    (9.950041652780257, 0.9983341664682815, -0.08802404672281641, 0.029404007796028867, 0.02523750426506223, 0.0900190098240828),
    (9.210609940028851, 3.8941834230865053, -0.0018010607323841225, 0.004782320778918114, 0.004797782146756686, 0.002053312718173076),
    (6.967067093471654, 7.173560908995228, 0.00016734161800684586, -9.352644138689403e-05, -9.123603447833014e-05, -0.00017647585063844634),
    (2.6749882862458736, 9.63558185417193, 5.3483595072302575e-06, 1.5399815028492896e-05, 1.6194944946617022e-05, -5.40349051429448e-06),
    (11.9, 0.0, 0.025049441699589645, -0.22983321394337505, -0.22898324966192404, -0.03471149833403061),
    (11.840549566808507, 1.188017658097255, -5.298596288518716e-05, -0.07040125581926704, -0.07075757288745226, -0.0028730247155705373),
    (10.960625828634333, 4.634078273472941, -0.0019176534116795909, -0.0011523693207021847, -0.0012448197579533863, 0.0019062337267998835),
    (8.290809841231269, 8.536537481704322, 3.087667887087559e-05, 3.278212605869049e-05, 3.464627182314303e-05, -3.0872785782232785e-05),
    (3.1832360606325896, 11.466342406464596, -4.1647043467321523e-07, 2.363275148066771e-06, 2.4527661632251094e-06, 4.5863267303702056e-07),
    (12.1, 0.0, 0.06966677360680731, -0.2184383805509255, -0.2157489733769248, -0.07873693145139575),
    (12.039550399864112, 1.2079843414266207, 0.013490484914184675, -0.06709615884991925, -0.06687566003568016, -0.016300172897205877),
    (11.14483802743491, 4.711961941934671, -0.0015357487709592255, -0.0013618685390416007, -0.0014419898200835396, 0.001510300610634189),
    (8.430151183100701, 8.680008699884226, 2.235825965507035e-05, 3.158275801674698e-05, 3.314265697036479e-05, -2.2135673908959673e-05),
    (3.2367358263575072, 11.659054043548034, -4.43638032888274e-07, 1.9121654752235963e-06, 1.9822592050287447e-06, 4.813771829186757e-07),
    (14.0, 0.0, 0.17107347611045867, 0.1271925685821837, 0.13337515469879324, -0.16664484185617226),
    (13.93005831389236, 1.3976678330555943, 0.04569973631561308, 0.02613500230160947, 0.027860376124797113, -0.04496608588407084),
    (12.894853916040391, 5.451856792321107, 0.0007170166685411698, -0.0005621356304410716, -0.000546930224446118, -0.0007455051209070749),
    (9.753893930860315, 10.042985272593318, -5.996768817909207e-06, 6.996671199830733e-06, 7.03002259355549e-06, 6.3200000654214465e-06),
    (3.744983600744223, 13.489814595840702, -1.9674262471981867e-07, 2.1696774695538e-07, 2.2250131011779028e-07, 2.0541911053631013e-07),
    (16.9, 0.0, -0.17878338789121923, -0.07543154755580285, -0.08074925425014197, 0.17663144309012718),
    (16.815570393198634, 1.6871847413313956, -0.034628218990336815, -0.009393970878891971, -0.010441213653263181, 0.03446951520129061),
    (15.565930798648756, 6.581169985016193, -0.00011345471876557852, 0.00024306229220289385, 0.0002428757475971089, 0.0001213392305041632),
    (11.774343387967095, 12.123317936201934, -4.194929725550802e-07, -9.61031218424472e-07, -9.89871935137593e-07, 4.0897729700966156e-07),
    (4.520730203755526, 16.28413333355056, -1.6298049125739014e-08, 9.485586790674111e-10, 8.496756159046982e-10, 1.6764137983919633e-08),
    (17.1, 0.0, -0.15928533153226532, -0.10881904730042999, -0.11351884829143513, 0.15617391314836485),
    (17.01457122625424, 1.7071514246607618, -0.03126800830555136, -0.01564741621764176, -0.01660583634989874, 0.030918535523084496),
    (15.750142997449336, 6.659053653477924, -0.00014353812852426355, 0.00020063402719707404, 0.0001991529809370624, 0.00015055245660916834),
    (11.913684729836529, 12.26678915438184, -2.427990334042898e-07, -8.69927312337006e-07, -8.929974293784762e-07, 2.3051936139802416e-07),
    (4.574229969480444, 16.476844970634, -1.3386018991168741e-08, 6.177140943902673e-11, -3.847920434586728e-11, 1.3758943404821703e-08),
    (19.5, 0.0, 0.17885382704017289, -0.025451742976154466, -0.02087707014809752, -0.1795645668963179),
    (19.4025812229215, 1.946751624613149, 0.02470333334212522, -0.007337109101336511, -0.006729950683638081, -0.024960975304503436),
    (17.96068938305626, 7.593657675018685, -2.7623388177758444e-05, -8.645732450268705e-05, -8.798479726417184e-05, 2.588405432036324e-05),
    (13.585780832269725, 13.988443772540695, 1.491069910900238e-07, -2.5640687954479716e-08, -2.3495286748858038e-08, -1.52296625075897e-07),
    (5.2162271581794535, 18.789384615635264, -9.98097680313479e-10, -7.394115647359239e-10, -7.641676764674517e-10, 1.017532583094697e-09),
    (25.0, 0.0, 0.09626678327595811, -0.12724943226800614, -0.1253502495802899, -0.09882996478323741),
    (24.875104131950643, 2.495835416170704, 0.005986416110199615, -0.011703517025382955, -0.01161029839286393, -0.0062318748085560816),
    (23.02652485007213, 9.735458557716262, -9.410036333250524e-06, -4.279413033493408e-07, -6.03302245271348e-07, 9.476745885223825e-06),
    (17.417667733679135, 17.93390227248807, -2.2439864950176574e-09, -1.287562764212617e-09, -1.336854232970822e-09, 2.258465865474573e-09),
    (6.687470715614684, 24.088954635429825, 2.8127204679565874e-12, -4.7094543003297025e-12, -4.784655528722439e-12, -2.8911930363956986e-12),
    (60.0, 0.0, -0.09147180408906187, 0.0473589522094494, 0.046598383758166315, 0.09186960936986689),
    (59.70024991668154, 5.990004998809689, -0.00017448541914585363, 0.00018982452448424342, 0.0001885433907885909, 0.00017620904204965237),
    (55.2636596401731, 23.36510053851903, -4.731359970680181e-12, -5.600013277954906e-12, -5.6545154536339694e-12, 4.703983495744168e-12),
    (41.802402560829925, 43.041365453971366, -2.0346406149079166e-20, 4.659669977378066e-21, 4.570087387749953e-21, 2.049490180396457e-20),
    (16.04992971747524, 57.813491125031575, -3.678635489059248e-27, 7.121263367214039e-27, 7.170099627241701e-27, 3.723815485752268e-27),
    (200.0, 0.0, -0.015437439930565091, -0.05426577524981791, -0.05430453818237822, 0.01530182458038999),
    (199.00083305560514, 19.966683329365633, -1.166452184959045e-10, -2.9099034023652263e-11, -2.9396467689791076e-11, 1.1660232226994225e-10),
    (184.21219880057703, 77.8836684617301, 4.4667761984550166e-36, 7.173232015083311e-36, 7.190506393799565e-36, -4.4546331297079774e-36),
    (139.34134186943308, 143.47121817990455, 2.762253259485565e-64, -2.063553697387011e-65, -2.0192282006918838e-65, -2.7675655573325554e-64),
    (1500.0, 0.0, -0.01608585218869033, -0.01287083980801182, -0.01287620247319177, 0.016081562802888857),
    (1492.5062479170385, 149.75012497024224, -1.581393292749419e-67, 1.0491098810035189e-67, 1.0486203700610214e-67, 1.5817939487519617e-67),
];
