use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use roughscat::forward::*;
use roughscat::imaging::*;
use roughscat::kernels::*;
use roughscat::Error;

fn medium() -> ElasticMedium {
    ElasticMedium::new(1.0, 1.0, 15.0).unwrap()
}

fn meta(n: usize, a: f64) -> DatasetMeta {
    let m = medium();
    DatasetMeta {
        medium: m,
        params: GeneralizedStressParams::pseudo(&m),
        geometry: MeasurementGeometry::new(2.0, a, n).unwrap(),
        surface: SurfaceProfile::flat(0.0),
        bie: BIEConfig::for_aperture(&m, a),
        noise: None,
    }
}

const SCATTERER: Vec2 = Vec2 { x1: 0.4, x2: 0.6 };

/// Born-type data of a point scatterer at SCATTERER: closed form, no solver.
fn frozen_dataset() -> &'static CauchyDataSet {
    static D: OnceLock<CauchyDataSet> = OnceLock::new();
    D.get_or_init(|| {
        let meta = meta(20, 5.0);
        let m = meta.medium;
        let p = meta.params;
        let pts = meta.geometry.points();
        CauchyDataSet::from_fn(meta, |k, i, j| {
            let inc = gamma(&m, SCATTERER, pts[k]).unwrap().col(j);
            let g = gamma(&m, pts[i], SCATTERER).unwrap();
            let s = pi1(&m, &p, pts[i], SCATTERER, Vec2::E2).unwrap();
            let apply = |a: Mat2C| Vec2C::new(a.a11 * inc.x1 + a.a12 * inc.x2, a.a21 * inc.x1 + a.a22 * inc.x2);
            (apply(g), apply(s))
        })
        .unwrap()
    })
}

fn zero_dataset() -> CauchyDataSet {
    CauchyDataSet::from_fn(meta(10, 4.0), |_, _, _| (Vec2C::ZERO, Vec2C::ZERO)).unwrap()
}

fn small_grid() -> SamplingGrid {
    SamplingGrid::new(-1.0, 1.0, 0.0, 1.2, 9, 7).unwrap()
}

#[test]
fn zero_data_gives_pure_background() {
    let d = zero_dataset();
    let m = medium();
    let p = GeneralizedStressParams::pseudo(&m);
    let cfg = ImagingConfig { m: 64, normalize: false };
    let z = Vec2::new(0.3, 0.7);
    let h = d.meta.geometry.spacing();
    let mut expected = 0.0;
    for j in 1..=2 {
        for y in d.meta.geometry.points() {
            let im = im_gamma_half(&m, z, y, CirclePart::Minus, 64).unwrap();
            expected += h * (Complex64::new(0.0, 2.0) * im.get(j, j)).norm_sqr();
        }
    }
    let got = indicator_at(&d, &m, &p, z, &cfg).unwrap();
    assert!((got - expected).abs() <= 1e-12 * expected, "{got} vs {expected}");
}

#[test]
fn frozen_probe_values() {
    let d = frozen_dataset();
    let m = medium();
    let p = GeneralizedStressParams::pseudo(&m);
    let cfg = ImagingConfig::default();
    let probes = [(0.4, 0.6), (0.0, 0.0), (-1.0, 1.0), (0.4, 0.9), (2.0, 0.3)];
    // recorded at the first verified run
    let pinned = [
        9.30886638921854526e-3,
        6.71358315654588169e-3,
        1.18325977137333366e-2,
        1.13406358702558413e-2,
        8.56022029553833719e-3,
    ];
    for (&(x1, x2), want) in probes.iter().zip(pinned) {
        let got = indicator_at(d, &m, &p, Vec2::new(x1, x2), &cfg).unwrap();
        assert!((got - want).abs() <= 1e-10 * want, "({x1}, {x2}): {got:.17e} vs {want:.17e}");
    }
}

/// Example 3 data on a reduced aperture (N = 50, A = 10) at frequency omega.
fn example3_dataset(omega: f64) -> CauchyDataSet {
    let m = ElasticMedium::new(1.0, 1.0, omega).unwrap();
    let g = MeasurementGeometry::new(2.0, 10.0, 50).unwrap();
    let c = BIEConfig::for_aperture(&m, 10.0);
    generate_dataset(&SurfaceProfile::example3(), &g, &m, &GeneralizedStressParams::pseudo(&m), &c).unwrap()
}

/// I along x1 = 0 on 0.01 steps over x2 ∈ [0, 1.2].
fn column_profile(d: &CauchyDataSet) -> Vec<(f64, f64)> {
    let m = d.meta.medium;
    let plan = ImagingPlan::new(d, &m, &d.meta.params, &ImagingConfig::default()).unwrap();
    (0..=120).map(|i| {
        let x2 = i as f64 * 0.01;
        (x2, plan.indicator(Vec2::new(0.0, x2)).unwrap())
    }).collect()
}

/// Width of the contiguous region around the peak where I exceeds the midpoint
/// between the column minimum and the peak (the image sits on a pedestal).
fn half_max_width(profile: &[(f64, f64)]) -> f64 {
    let (imax, peak) = profile.iter().enumerate().fold((0, 0.0f64), |b, (i, p)| if p.1 > b.1 { (i, p.1) } else { b });
    let floor = profile.iter().fold(f64::INFINITY, |m, p| m.min(p.1));
    let level = 0.5 * (peak + floor);
    let mut lo = imax;
    while lo > 0 && profile[lo - 1].1 >= level {
        lo -= 1;
    }
    let mut hi = imax;
    while hi + 1 < profile.len() && profile[hi + 1].1 >= level {
        hi += 1;
    }
    profile[hi].0 - profile[lo].0
}

#[test]
fn example3_indicator_peaks_on_the_surface_and_sharpens_with_frequency() {
    let d = example3_dataset(15.0);
    let m = d.meta.medium;
    let f0 = SurfaceProfile::example3().f(0.0);
    let plan = ImagingPlan::new(&d, &m, &d.meta.params, &ImagingConfig::default()).unwrap();
    let on = plan.indicator(Vec2::new(0.0, f0)).unwrap();
    for off in [f0 - 0.5, f0 + 0.5] {
        let v = plan.indicator(Vec2::new(0.0, off)).unwrap();
        assert!(on > v, "I on surface {on} vs {v} at x2 = {off}");
    }
    let fine = half_max_width(&column_profile(&d));
    let coarse = half_max_width(&column_profile(&example3_dataset(7.5)));
    assert!(fine < coarse, "half-max width {fine} at k_s = 15 vs {coarse} at k_s = 7.5");
}

#[test]
fn image_dimensions_normalization_and_determinism() {
    let d = frozen_dataset();
    let m = medium();
    let p = GeneralizedStressParams::pseudo(&m);
    let grid = small_grid();
    let cfg = ImagingConfig { m: 64, normalize: true };
    let par = compute_image(d, &m, &p, &grid, &cfg).unwrap();
    let ser = compute_image_serial(d, &m, &p, &grid, &cfg).unwrap();
    assert_eq!(par.values().len(), 63);
    assert_eq!(par.max(), 1.0);
    assert!(par.values().iter().all(|v| *v >= 0.0 && v.is_finite()));
    for (a, b) in par.values().iter().zip(ser.values()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    assert_eq!(par, compute_image(d, &m, &p, &grid, &cfg).unwrap());
    assert_eq!(par.provenance.dataset_id, d.fingerprint());
    assert_eq!(par.provenance.dataset_id.len(), 16);
    // each cell of the image equals the pointwise indicator
    let raw = compute_image(d, &m, &p, &grid, &ImagingConfig { m: 64, normalize: false }).unwrap();
    let z = grid.point(3, 4);
    let direct = indicator_at(d, &m, &p, z, &ImagingConfig { m: 64, normalize: false }).unwrap();
    assert_eq!(raw.get(3, 4), direct);
}

#[test]
fn invalid_points_and_grids_are_rejected() {
    let d = frozen_dataset();
    let m = medium();
    let p = GeneralizedStressParams::pseudo(&m);
    let cfg = ImagingConfig::default();
    let receiver = d.meta.geometry.point(3);
    assert!(indicator_at(d, &m, &p, receiver, &cfg).is_err());
    assert!(matches!(indicator_at(d, &m, &p, Vec2::new(0.0, 2.5), &cfg), Err(Error::Domain(_))));
    let high = SamplingGrid::new(-1.0, 1.0, 0.0, 2.5, 4, 4).unwrap();
    assert!(compute_image(d, &m, &p, &high, &cfg).is_err());
    assert!(SamplingGrid::new(-1.0, 1.0, 0.0, 1.0, 1, 4).is_err());
    assert!(SamplingGrid::new(1.0, 1.0, 0.0, 1.0, 4, 4).is_err());
    assert!(compute_image(d, &m, &p, &small_grid(), &ImagingConfig { m: 4, normalize: false }).is_err());
}

#[test]
fn indicator_is_continuous() {
    let d = frozen_dataset();
    let m = medium();
    let plan = ImagingPlan::new(d, &m, &GeneralizedStressParams::pseudo(&m), &ImagingConfig { m: 64, normalize: false }).unwrap();
    let z = Vec2::new(0.1, 0.8);
    let base = plan.indicator(z).unwrap();
    let diffs: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&s| (plan.indicator(z + Vec2::new(s, s)).unwrap() - base).abs())
        .collect();
    for w in diffs.windows(2) {
        assert!(w[1] < w[0], "{diffs:?}");
    }
    assert!(diffs[3] < 1e-3 * base);
}

fn image_from(grid: SamplingGrid, f: impl Fn(f64, f64) -> f64) -> ImageGrid {
    let values = (0..grid.nx2).flat_map(|i2| (0..grid.nx1).map(move |i1| (i1, i2))).map(|(i1, i2)| f(grid.x1(i1), grid.x2(i2))).collect();
    ImageGrid::new(grid, values, ImageProvenance { dataset_id: String::new(), config: ImagingConfig::default() }).unwrap()
}

#[test]
fn ridge_tie_rule_and_bumps() {
    let grid = SamplingGrid::new(-1.0, 1.0, 0.0, 1.0, 5, 11).unwrap();
    let flat = image_from(grid, |_, _| 3.0);
    assert!(extract_ridge(&flat).iter().all(|&(_, x2)| x2 == 0.0));
    let centre = |x1: f64| 0.5 + 0.2 * x1;
    let bump = image_from(grid, |x1, x2| (-(x2 - centre(x1)).powi(2) / 0.01).exp());
    for (x1, x2) in extract_ridge(&bump) {
        assert!((x2 - centre(x1)).abs() <= 0.05 + 1e-12, "{x1}: {x2}");
    }
    let zero = image_from(grid, |_, _| 0.0).normalized();
    assert_eq!(zero.max(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ridge_is_invariant_under_positive_scaling(values in prop::collection::vec(0.0..10.0f64, 24), c in 1e-3..1e3f64) {
        let grid = SamplingGrid::new(0.0, 1.0, 0.0, 1.0, 4, 6).unwrap();
        let prov = ImageProvenance { dataset_id: String::new(), config: ImagingConfig::default() };
        let a = ImageGrid::new(grid, values.clone(), prov.clone()).unwrap();
        let b = ImageGrid::new(grid, values.iter().map(|v| v * c).collect(), prov).unwrap();
        prop_assert_eq!(extract_ridge(&a), extract_ridge(&b));
        prop_assert_eq!(extract_ridge(&a), extract_ridge(&a.clone().normalized()));
    }

    #[test]
    fn indicator_is_nonnegative(x1 in -3.0..3.0f64, x2 in -1.0..1.5f64) {
        let d = frozen_dataset();
        let m = medium();
        let v = indicator_at(d, &m, &GeneralizedStressParams::pseudo(&m), Vec2::new(x1, x2), &ImagingConfig { m: 16, normalize: false }).unwrap();
        prop_assert!(v >= 0.0 && v.is_finite());
    }
}
