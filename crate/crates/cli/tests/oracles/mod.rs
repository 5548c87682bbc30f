//! Reference values evaluated independently at 50 significant digits and
//! rounded to the nearest f64.

pub const VOTE_WEIGHT: &[(f64, u32, f64, f64)] = &[
    (1.0, 1, 0.7, 1.0),
    (10.0, 1, 0.7, 5.213594362117865),
    (1.0, 100, 0.7, 10.0),
    (20.0, 100, 0.7, 91.30495168499705),
    (4.0, 9, 0.5, 9.0),
    (2.5, 3, 0.3, 3.8526727495032844),
    (10.0, 25, 0.0, 50.0),
    (10.0, 25, 1.0, 15.811388300841896),
    (21.777, 2, 0.5, 18.698437093345436),
    (19.286, 16, 1.0, 17.5663314326014),
    (11.769, 71, 0.0, 99.16735668051257),
    (0.869, 100, 0.7, 9.132411864395994),
    (10.251, 66, 0.5, 54.645200011949306),
    (6.934, 99, 0.0, 68.99242888897302),
    (23.473, 9, 0.2, 59.24213653181489),
    (7.172, 36, 0.5, 29.55017699580984),
    (14.318, 27, 0.9, 25.13546235915595),
    (5.737, 2, 0.2, 7.1681404321663695),
    (2.17, 31, 0.5, 10.14193886582069),
    (9.502, 100, 1.0, 30.82531427252608),
    (8.781, 64, 0.2, 60.939640344045),
    (22.281, 83, 0.0, 202.98957057691413),
    (20.512, 71, 0.7, 78.56468140607095),
    (13.584, 65, 0.2, 93.55709597330932),
];
pub const VOTER_REWARD: &[(f64, u32, f64, f64)] = &[
    (1.0, 1, 0.5, 1.0),
    (10.0, 1, 0.5, 55.0),
    (2.0, 225, 1.0, 60.0),
    (5.0, 16, 0.0, 20.0),
    (3.0, 4, 0.25, 9.0),
    (10.0, 100, 0.5, 550.0),
    (19.542, 50, 0.75, 2059.822015220846),
    (20.05, 18, 0.1, 247.11366748143453),
    (10.45, 53, 0.0, 76.07714834298142),
    (2.767, 47, 0.0, 18.969596279309688),
    (11.299, 5, 1.0, 285.4729871467246),
    (9.253, 69, 0.1, 140.2947312087163),
    (24.814, 19, 1.0, 2683.9248800058435),
    (20.974, 12, 0.1, 217.77929605278047),
    (2.544, 93, 0.0, 24.533447535966076),
    (17.82, 61, 1.0, 2480.1635291833804),
    (2.23, 77, 1.0, 43.637020402062284),
    (0.733, 50, 0.0, 5.183092706097393),
    (8.522, 84, 0.1, 136.85631717776647),
    (3.002, 96, 0.75, 73.57780228759802),
    (12.176, 50, 0.5, 567.2091552098813),
    (22.834, 93, 0.0, 220.20312147651313),
    (10.276, 98, 0.75, 809.443409720321),
    (11.924, 12, 0.5, 266.9190337718285),
];
pub const CERTIFIER_REWARD: &[(f64, f64, usize, f64, f64)] = &[
    (10.0, 100.0, 4, 20.0, 20.0),
    (11.0, 0.0, 0, 11.0, 11.0),
    (15.0, 50.0, 0, 15.0, 65.0),
    (12.0, 1000.0, 9, 36.0, 45.333333333333336),
    (20.0, 7.0, 2, 40.0, 21.166666666666668),
    (19.0, 3240.0, 19, 33.0, 112.27272727272727),
    (20.0, 2202.0, 1, 21.0, 1068.5714285714287),
    (17.0, 543.0, 17, 20.0, 42.641666666666666),
    (11.0, 4092.0, 2, 56.0, 278.92857142857144),
    (16.0, 4010.0, 30, 54.0, 54.3273596176822),
    (12.0, 2838.0, 2, 23.0, 505.5652173913044),
    (18.0, 2208.0, 0, 50.0, 812.88),
    (16.0, 2677.0, 28, 39.0, 53.87091069849691),
    (15.0, 56.0, 4, 59.0, 17.847457627118644),
    (11.0, 952.0, 30, 23.0, 25.687237026647967),
    (19.0, 1805.0, 8, 67.0, 75.87396351575455),
    (12.0, 1710.0, 29, 70.0, 21.771428571428572),
    (16.0, 3629.0, 19, 63.0, 62.08253968253968),
    (11.0, 274.0, 13, 57.0, 14.776942355889725),
    (18.0, 997.0, 24, 43.0, 34.693953488372095),
    (14.0, 3226.0, 2, 43.0, 364.1085271317829),
    (18.0, 3729.0, 2, 35.0, 657.2571428571429),
    (11.0, 2614.0, 22, 15.0, 94.34492753623188),
    (14.0, 3860.0, 29, 21.0, 99.77777777777777),
];
pub const PREDICTION_SCORE: &[(f64, bool, f64)] = &[
    (0.0, true, 0.0),
    (0.0, false, 1.0),
    (1.0, true, 1.0),
    (1.0, false, 0.0),
    (0.5, true, 0.75),
    (0.5, false, 0.75),
    (0.8, true, 0.96),
    (0.8, false, 0.36),
    (0.0538, true, 0.10470556),
    (0.7871, false, 0.38047359),
    (0.4352, false, 0.81060096),
    (0.1129, false, 0.98725359),
    (0.8745, true, 0.98424975),
    (0.7345, true, 0.92950975),
    (0.0404, false, 0.99836784),
    (0.4831, false, 0.76661439),
    (0.1563, true, 0.28817031),
    (0.9461, true, 0.99709479),
    (0.0576, true, 0.11188224),
    (0.576, true, 0.820224),
    (0.6549, false, 0.57110599),
    (0.2595, true, 0.45165975),
    (0.735, false, 0.459775),
    (0.3398, true, 0.56413596),
];
/// Ballots as `(voter, vote, prediction)`, the scored index, the score.
pub type InformationCase = (&'static [(u64, bool, f64)], usize, f64);

pub const INFORMATION_SCORE: &[InformationCase] = &[
    (&[(0, true, 0.8)], 0, 1.0),
    (&[(0, true, 0.8), (1, false, 0.3)], 0, 1.0),
    (&[(0, true, 0.8), (0, true, 0.6)], 1, 1.0),
    (&[(0, true, 0.8), (1, true, 0.6), (2, true, 0.7)], 0, 0.9775),
    (&[(2, true, 0.9675), (2, true, 0.1717), (2, true, 0.3099)], 2, 1.0),
    (&[(4, true, 0.1151), (3, true, 0.7207), (3, true, 0.9559), (4, true, 0.3339), (1, true, 0.924), (2, true, 0.4576)], 5, 0.9767986176),
    (&[(4, false, 0.3225), (2, false, 0.2961), (5, false, 0.4215), (3, false, 0.0565)], 0, 0.9958440488888889),
    (&[(5, true, 0.0832), (5, false, 0.3813), (5, true, 0.5194), (2, false, 0.7169), (0, true, 0.3586)], 2, 0.97414336),
    (&[(4, true, 0.0512), (2, false, 0.3705), (5, false, 0.1598), (2, false, 0.8575), (1, false, 0.8804), (2, true, 0.2511)], 4, 0.82544316),
    (&[(2, false, 0.1469), (3, true, 0.9385)], 0, 1.0),
    (&[(5, false, 0.8505), (4, false, 0.5143), (2, true, 0.5882), (4, true, 0.2144), (3, true, 0.0335), (5, true, 0.5398), (1, false, 0.0129), (2, true, 0.7295), (1, true, 0.0556)], 0, 0.65554839),
    (&[(5, false, 0.6575), (5, false, 0.4031), (4, false, 0.983), (4, false, 0.0343), (0, true, 0.7365), (3, true, 0.3972), (5, true, 0.5067), (3, false, 0.2223)], 0, 0.94031751),
    (&[(2, true, 0.8376), (4, false, 0.6674), (1, true, 0.48), (0, false, 0.315)], 0, 0.87212224),
    (&[(1, true, 0.3516), (5, true, 0.9127), (0, true, 0.0247), (1, true, 0.5081), (3, false, 0.6086), (2, true, 0.5316)], 5, 0.993222594375),
    (&[(3, true, 0.4093), (0, true, 0.6723), (3, false, 0.1634), (0, false, 0.8231), (4, true, 0.7348), (5, false, 0.3033), (2, true, 0.185)], 4, 0.90228124),
    (&[(3, true, 0.8385), (0, true, 0.4506), (0, false, 0.3201), (5, true, 0.5759)], 2, 1.0),
    (&[(1, false, 0.0206), (5, false, 0.6863), (3, true, 0.8019)], 0, 0.55684351),
    (&[(2, true, 0.7763), (1, false, 0.9282), (0, false, 0.5666), (3, true, 0.7536), (4, false, 0.8699), (3, true, 0.9782)], 0, 0.99197184),
    (&[(4, true, 0.3488), (2, false, 0.6191), (0, true, 0.4386), (4, false, 0.0864), (4, true, 0.905), (4, true, 0.2583), (3, false, 0.1278), (1, true, 0.6173)], 6, 0.9493974975),
    (&[(0, true, 0.8375), (3, true, 0.9428), (2, true, 0.4957), (1, false, 0.2327)], 0, 0.9860169375),
    (&[(4, false, 0.6048), (1, false, 0.0097), (1, false, 0.2761), (4, true, 0.2309), (1, false, 0.3894)], 3, 1.0),
    (&[(2, true, 0.2576), (4, false, 0.7762)], 0, 1.0),
    (&[(4, true, 0.7399), (2, true, 0.5209), (1, false, 0.7193), (3, false, 0.6213), (1, true, 0.9508)], 1, 0.8947321975),
    (&[(5, true, 0.9085), (2, true, 0.4769), (5, false, 0.969), (1, true, 0.7305)], 1, 0.88262524),
];
