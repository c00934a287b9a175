"""Tracy-Widom reference tables (generated by tools/build_tw_tables.py; do not edit)."""

NOTE = (
    "Fredholm determinants of the Airy kernels, Gauss-Legendre Nystrom "
    "discretisation with 100 nodes; moments by Simpson integration of the "
    "survival function (step 0.005); quantiles by Brent root finding."
)

BETA1_MEAN = -1.2065335746
BETA1_VAR = 1.6077810345
BETA1_QUANTILES = (
    (0.0001, -5.2495815669),
    (0.00025, -5.0268336927),
    (0.0005, -4.8465221204),
    (0.001, -4.6541982444),
    (0.0025, -4.3777318359),
    (0.005, -4.1478765021),
    (0.0075, -4.0032986427),
    (0.01, -3.8954326731),
    (0.02, -3.6140571432),
    (0.03, -3.4323769918),
    (0.04, -3.2940212433),
    (0.05, -3.1803799769),
    (0.06, -3.0828574656),
    (0.07, -2.9967348032),
    (0.08, -2.9191264202),
    (0.09, -2.8481315706),
    (0.1, -2.7824279057),
    (0.11, -2.7210560586),
    (0.12, -2.6632964547),
    (0.13, -2.6085945562),
    (0.14, -2.5565132801),
    (0.15, -2.5067015004),
    (0.16, -2.4588724981),
    (0.17, -2.4127888000),
    (0.18, -2.3682512509),
    (0.19, -2.3250909702),
    (0.2, -2.2831633202),
    (0.21, -2.2423433091),
    (0.22, -2.2025220350),
    (0.23, -2.1636038992),
    (0.24, -2.1255043952),
    (0.25, -2.0881483362),
    (0.26, -2.0514684193),
    (0.27, -2.0154040513),
    (0.28, -1.9799003814),
    (0.29, -1.9449074961),
    (0.3, -1.9103797462),
    (0.31, -1.8762751778),
    (0.32, -1.8425550502),
    (0.33, -1.8091834226),
    (0.34, -1.7761267995),
    (0.35, -1.7433538228),
    (0.36, -1.7108350039),
    (0.37, -1.6785424885),
    (0.38, -1.6464498489),
    (0.39, -1.6145318996),
    (0.4, -1.5827645318),
    (0.41, -1.5511245650),
    (0.42, -1.5195896110),
    (0.43, -1.4881379504),
    (0.44, -1.4567484175),
    (0.45, -1.4254002936),
    (0.46, -1.3940732064),
    (0.47, -1.3627470337),
    (0.48, -1.3314018116),
    (0.49, -1.3000176444),
    (0.5, -1.2685746166),
    (0.51, -1.2370527047),
    (0.52, -1.2054316891),
    (0.53, -1.1736910639),
    (0.54, -1.1418099441),
    (0.55, -1.1097669695),
    (0.56, -1.0775402031),
    (0.57, -1.0451070235),
    (0.58, -1.0124440106),
    (0.59, -0.9795268206),
    (0.6, -0.9463300515),
    (0.61, -0.9128270950),
    (0.62, -0.8789899733),
    (0.63, -0.8447891578),
    (0.64, -0.8101933667),
    (0.65, -0.7751693375),
    (0.66, -0.7396815697),
    (0.67, -0.7036920330),
    (0.68, -0.6671598333),
    (0.69, -0.6300408297),
    (0.7, -0.5922871910),
    (0.71, -0.5538468824),
    (0.72, -0.5146630641),
    (0.73, -0.4746733860),
    (0.74, -0.4338091529),
    (0.75, -0.3919943318),
    (0.76, -0.3491443618),
    (0.77, -0.3051647175),
    (0.78, -0.2599491615),
    (0.79, -0.2133775997),
    (0.8, -0.1653134252),
    (0.81, -0.1156001969),
    (0.82, -0.0640574376),
    (0.83, -0.0104752582),
    (0.84, 0.0453926164),
    (0.85, 0.1038380259),
    (0.86, 0.1652106590),
    (0.87, 0.2299348012),
    (0.88, 0.2985326609),
    (0.89, 0.3716576578),
    (0.9, 0.4501432891),
    (0.91, 0.5350772940),
    (0.92, 0.6279187638),
    (0.93, 0.7306922034),
    (0.94, 0.8463289810),
    (0.95, 0.9793160535),
    (0.96, 1.1370612997),
    (0.97, 1.3332134783),
    (0.98, 1.5977556741),
    (0.99, 2.0234492814),
    (0.9925, 2.1918975035),
    (0.995, 2.4223265859),
    (0.9975, 2.7997914402),
    (0.999, 3.2721960590),
    (0.9995, 3.6128651672),
    (0.99975, 3.9413487342),
    (0.9999, 4.3594203439),
)

BETA2_MEAN = -1.7710868074
BETA2_VAR = 0.8131947928
BETA2_QUANTILES = (
    (0.0001, -4.7408967248),
    (0.00025, -4.5727476795),
    (0.0005, -4.4368865118),
    (0.001, -4.2922364010),
    (0.0025, -4.0848005056),
    (0.005, -3.9128112459),
    (0.0075, -3.8048626960),
    (0.01, -3.7244459464),
    (0.02, -3.5151801227),
    (0.03, -3.3804659200),
    (0.04, -3.2780992146),
    (0.05, -3.1941667322),
    (0.06, -3.1222484082),
    (0.07, -3.0588224870),
    (0.08, -3.0017368592),
    (0.09, -2.9495747284),
    (0.1, -2.9013509385),
    (0.11, -2.8563510968),
    (0.12, -2.8140396115),
    (0.13, -2.7740039069),
    (0.14, -2.7359189288),
    (0.15, -2.6995236556),
    (0.16, -2.6646050321),
    (0.17, -2.6309866707),
    (0.18, -2.5985207082),
    (0.19, -2.5670818143),
    (0.2, -2.5365626997),
    (0.21, -2.5068706937),
    (0.22, -2.4779250966),
    (0.23, -2.4496551059),
    (0.24, -2.4219981717),
    (0.25, -2.3948986778),
    (0.26, -2.3683068738),
    (0.27, -2.3421780030),
    (0.28, -2.3164715822),
    (0.29, -2.2911508048),
    (0.3, -2.2661820398),
    (0.31, -2.2415344105),
    (0.32, -2.2171794354),
    (0.33, -2.1930907232),
    (0.34, -2.1692437086),
    (0.35, -2.1456154251),
    (0.36, -2.1221843065),
    (0.37, -2.0989300128),
    (0.38, -2.0758332772),
    (0.39, -2.0528757698),
    (0.4, -2.0300399762),
    (0.41, -2.0073090876),
    (0.42, -1.9846669020),
    (0.43, -1.9620977331),
    (0.44, -1.9395863270),
    (0.45, -1.9171177838),
    (0.46, -1.8946774853),
    (0.47, -1.8722510250),
    (0.48, -1.8498241421),
    (0.49, -1.8273826572),
    (0.5, -1.8049124089),
    (0.51, -1.7823991917),
    (0.52, -1.7598286930),
    (0.53, -1.7371864298),
    (0.54, -1.7144576838),
    (0.55, -1.6916274335),
    (0.56, -1.6686802837),
    (0.57, -1.6456003908),
    (0.58, -1.6223713833),
    (0.59, -1.5989762757),
    (0.6, -1.5753973754),
    (0.61, -1.5516161810),
    (0.62, -1.5276132702),
    (0.63, -1.5033681754),
    (0.64, -1.4788592451),
    (0.65, -1.4540634882),
    (0.66, -1.4289563986),
    (0.67, -1.4035117554),
    (0.68, -1.3777013957),
    (0.69, -1.3514949531),
    (0.7, -1.3248595561),
    (0.71, -1.2977594783),
    (0.72, -1.2701557297),
    (0.73, -1.2420055769),
    (0.74, -1.2132619755),
    (0.75, -1.1838728964),
    (0.76, -1.1537805168),
    (0.77, -1.1229202457),
    (0.78, -1.0912195380),
    (0.79, -1.0585964397),
    (0.8, -1.0249577873),
    (0.81, -0.9901969562),
    (0.82, -0.9541910147),
    (0.83, -0.9167970832),
    (0.84, -0.8778476129),
    (0.85, -0.8371441758),
    (0.86, -0.7944491563),
    (0.87, -0.7494744287),
    (0.88, -0.7018655970),
    (0.89, -0.6511795137),
    (0.9, -0.5968512971),
    (0.91, -0.5381443038),
    (0.92, -0.4740711818),
    (0.93, -0.4032631415),
    (0.94, -0.3237401170),
    (0.95, -0.2324744698),
    (0.96, -0.1244736525),
    (0.97, 0.0094477871),
    (0.98, 0.1894319545),
    (0.99, 0.4776360474),
    (0.9925, 0.5912272500),
    (0.995, 0.7462270820),
    (0.9975, 0.9992265378),
    (0.999, 1.3144194801),
    (0.9995, 1.5408232825),
    (0.99975, 1.7584883427),
    (0.9999, 2.0346917546),
)

