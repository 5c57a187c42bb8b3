use dustlink::atmosphere::{
    absorption_coefficient, doppler_halfwidth, doppler_shape, line_intensity_at_t, lorentz_shape, parse_par, Gas,
    GasMixture, LineShape, SpectralLine,
};
use dustlink::link::{capacity, channel_gain, h_dust, shannon_capacity, LinkConfig};
use dustlink::scatter::{
    dust_permittivity, ensemble_extinction, mie_coefficients, number_density_from_visibility, rayleigh_cext,
    rayleigh_terms, DensitySpec, MediumSpec, PermittivityModel, SizeDistribution,
};
use dustlink::storm::{build_beam_cone, count_in_beam, step_field, Particle, ParticleField, StormConfig};
use dustlink::transport::{
    estimate_transmittance, estimate_transmittance_with_workers, specific_attenuation, update_direction,
    AsymmetryPolicy, TransportConfig,
};
use dustlink::Planet;
use num_complex::Complex64;
use proptest::prelude::*;

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn line(freq_hz: f64, mol: u8) -> SpectralLine {
    let nu = freq_hz / 2.99792458e10;
    let mut s = format!(
        "{:>2}1{:>12.6}{:>10}{:>10}{:>5}{:>5}{:>10}{:>4}{:>8}",
        mol, nu, "1.000E-20", "0.000E+00", ".0700", ".3500", "100.0000", "0.75", "0.000000"
    );
    s.push_str(&" ".repeat(160 - s.len()));
    parse_par(&s).unwrap().remove(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // scatter

    #[test]
    fn extinction_monotone_in_density(a in 0.0f64..500.0, b in 0.0f64..500.0, f in 1e11f64..4e12) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let c_lo = ensemble_extinction(&MediumSpec::earth(DensitySpec::linear(lo)), f).unwrap().c_ext;
        let c_hi = ensemble_extinction(&MediumSpec::earth(DensitySpec::linear(hi)), f).unwrap().c_ext;
        prop_assert!(c_lo <= c_hi);
    }

    #[test]
    fn visibility_inverse_law(v1 in 1.0f64..1e5, v2 in 1.0f64..1e5) {
        let d = SizeDistribution::earth_default();
        let n1 = number_density_from_visibility(&d, v1).unwrap();
        let n2 = number_density_from_visibility(&d, v2).unwrap();
        prop_assert!(((n1 * v1) / (n2 * v2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_without_charge(f in 1e10f64..1e13, r in 1e-7f64..1e-4, re in 1.0f64..10.0, im in 0.0f64..5.0) {
        let eps = dust_permittivity(PermittivityModel::User(Complex64::new(re, im)), f).unwrap();
        let t = rayleigh_terms(f, r, &eps).unwrap();
        prop_assert_eq!(t.charge, 0.0);
        let total = rayleigh_cext(f, r, &eps).unwrap();
        prop_assert!((total - (t.scattering + t.absorption)).abs() <= 1e-12 * total.abs());
    }

    #[test]
    fn mie_c1_non_negative(re in -10.0f64..10.0, im in 0.0f64..20.0) {
        prop_assert!(mie_coefficients(Complex64::new(re, im)).c1 >= 0.0);
    }

    #[test]
    fn point_mass_ensemble_reduces(r in 1e-6f64..1e-4, per_m in 0.1f64..1e4, f in 1e11f64..4e12) {
        let dist = SizeDistribution::point_mass_at(r).unwrap();
        let medium = MediumSpec::new(dist, PermittivityModel::EarthDry, DensitySpec::linear(per_m));
        let eps = medium.permittivity_at(f).unwrap();
        let single = medium.cross_section(f, r, &eps).unwrap();
        let n0 = medium.number_density().unwrap();
        let c = ensemble_extinction(&medium, f).unwrap().c_ext;
        prop_assert!((c / (n0 * single) - 1.0).abs() < 1e-12);
    }

    // transport

    #[test]
    fn direction_stays_unit(theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU,
                            a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0) {
        let n = norm([a, b, c]);
        prop_assume!(n > 1e-3);
        let mu = [a / n, b / n, c / n];
        prop_assert!((norm(update_direction(mu, theta, phi)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn forward_limit_is_beer_lambert(c in 0.0f64..2.0, d in 0.1f64..50.0, seed in any::<u64>(), m in 1usize..200) {
        let mut cfg = TransportConfig::new(d, m, c, seed).with_asymmetry(AsymmetryPolicy::Fixed(1.0));
        cfg.weight_threshold = 0.0;
        let t = estimate_transmittance(&cfg).unwrap().transmittance;
        prop_assert!((t - (-c * d).exp()).abs() < 1e-9);
    }

    #[test]
    fn forward_limit_with_default_cutoff(c in 0.0f64..2.0, d in 0.1f64..50.0, seed in any::<u64>()) {
        // The weight cutoff can only drop packets whose Beer-Lambert weight is
        // already below it.
        let cfg = TransportConfig::new(d, 50, c, seed).with_asymmetry(AsymmetryPolicy::Fixed(1.0));
        let t = estimate_transmittance(&cfg).unwrap().transmittance;
        let exact = (-c * d).exp();
        if exact >= cfg.weight_threshold {
            prop_assert!((t - exact).abs() < 1e-9);
        } else {
            prop_assert!(t <= exact);
        }
    }

    #[test]
    fn attenuation_matches_stored_transmittance(c in 0.0f64..3.0, d in 0.5f64..20.0, seed in any::<u64>()) {
        let r = estimate_transmittance(&TransportConfig::new(d, 200, c, seed)).unwrap();
        prop_assert_eq!(r.attenuation_db_per_m.to_bits(), specific_attenuation(r.transmittance, d).to_bits());
    }

    #[test]
    fn common_seed_monotone(c1 in 0.0f64..2.0, c2 in 0.0f64..2.0, d in 0.5f64..20.0, seed in any::<u64>()) {
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let t = |c: f64, d: f64| estimate_transmittance(&TransportConfig::new(d, 300, c, seed)).unwrap().transmittance;
        prop_assert!(t(hi, d) <= t(lo, d));
        prop_assert!(t(lo, 2.0 * d) <= t(lo, d));
    }

    #[test]
    fn worker_count_irrelevant(c in 0.0f64..2.0, seed in any::<u64>()) {
        let cfg = TransportConfig::new(10.0, 500, c, seed);
        let one = estimate_transmittance_with_workers(&cfg, 1).unwrap();
        let many = estimate_transmittance_with_workers(&cfg, 8).unwrap();
        prop_assert_eq!(one.transmittance.to_bits(), many.transmittance.to_bits());
    }

    // atmosphere

    #[test]
    fn intensity_identity_at_reference(f in 1e11f64..3e12) {
        let l = line(f, 1);
        prop_assert_eq!(line_intensity_at_t(&l, 296.0), l.intensity);
    }

    #[test]
    fn absorption_linear_in_mixing_ratio(x in 1e-4f64..0.005, scale in 0.1f64..2.0, f in 1e11f64..2e12) {
        // Doppler shapes carry no self-broadening, so k is exactly linear in
        // each species' share.
        let lines = vec![line(f, 1), line(f * (1.0 + 1e-7), 1), line(f, 7)];
        let earth = GasMixture::earth().with_shape(LineShape::Doppler);
        let base = earth.clone().with_mixing_ratio(Gas::H2O, x).unwrap();
        let scaled = earth.clone().with_mixing_ratio(Gas::H2O, x * scale).unwrap();
        let o2_only = earth.with_mixing_ratio(Gas::H2O, 0.0).unwrap();
        let k = |m: &GasMixture| absorption_coefficient(m, &lines, &[f]).unwrap().k[0];
        let (k0, k1, ko) = (k(&base), k(&scaled), k(&o2_only));
        prop_assert!(k0 >= 0.0 && k1 >= 0.0);
        prop_assert!(k0 > ko);
        prop_assert!(((k1 - ko) / (k0 - ko) / scale - 1.0).abs() < 1e-9);
    }

    #[test]
    fn absorption_non_negative(lo in 1e11f64..1e12, span in 1e9f64..1e12, doppler in any::<bool>()) {
        let shape = if doppler { LineShape::Doppler } else { LineShape::Lorentz };
        let lines: Vec<_> = (0..6).map(|i| line(lo + span * i as f64 / 5.0, 1)).collect();
        let grid: Vec<f64> = (0..50).map(|i| lo + span * i as f64 / 49.0 * 1.1).collect();
        let m = GasMixture::for_planet(Planet::Mars).with_shape(shape);
        let spectrum = absorption_coefficient(&m, &lines, &grid).unwrap();
        prop_assert!(spectrum.k.iter().all(|&k| k >= 0.0));
    }

    #[test]
    fn parser_chunking_irrelevant(split in 0usize..5) {
        let text: String = [2e11, 5e11, 9e11, 1.2e12, 1.6e12]
            .iter()
            .map(|&f| {
                let l = line(f, 1);
                format!("{}\n", dustlink::atmosphere::format_par_record(&l).unwrap())
            })
            .collect();
        let whole = parse_par(&text).unwrap();
        let cut = text.lines().take(split).map(|l| format!("{l}\n")).collect::<String>();
        let rest = text.lines().skip(split).map(|l| format!("{l}\n")).collect::<String>();
        let mut pieces = parse_par(&cut).unwrap();
        pieces.extend(parse_par(&rest).unwrap());
        prop_assert_eq!(whole, pieces);
    }

    // link

    #[test]
    fn gains_compose(f in 1e11f64..1e13, d in 0.1f64..1e4, k in 0.0f64..1.0, t in 0.0f64..=1.0) {
        let g = channel_gain(f, d, k, t);
        let product = g.h_spr * g.h_abs * g.h_dust;
        prop_assert!((g.magnitude - product).abs() <= 1e-12 * product.abs());
    }

    #[test]
    fn dust_gain_inverts_transmittance(t in 1e-300f64..=1.0) {
        let h = h_dust(t);
        prop_assert!((h * h / t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn capacity_monotone(p1 in -30.0f64..40.0, p2 in -30.0f64..40.0, t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0) {
        let mut cfg = LinkConfig::for_planet(Planet::Earth);
        let g = |t: f64| channel_gain(cfg.center, 10.0, 1e-3, t);
        let c = |cfg: &LinkConfig, t: f64| capacity(cfg, g(t)).capacity_bps;
        let (tl, th) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(c(&cfg, tl) <= c(&cfg, th));
        let (pl, ph) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        cfg.tx_power = 1e-3 * 10f64.powf(pl / 10.0);
        let lo = c(&cfg, 0.5);
        cfg.tx_power = 1e-3 * 10f64.powf(ph / 10.0);
        prop_assert!(lo <= c(&cfg, 0.5));
        prop_assert_eq!(c(&cfg, 0.0), 0.0);
    }

    #[test]
    fn capacity_formula_planet_independent(bw in 1e6f64..1e11, snr in 0.0f64..1e6) {
        let direct = shannon_capacity(bw, snr);
        for planet in [Planet::Earth, Planet::Mars] {
            let mut cfg = LinkConfig::for_planet(planet);
            cfg.band = (1e12, 1e12 + bw);
            cfg.center = 1e12 + bw / 2.0;
            cfg.noise_psd = 1.0;
            cfg.tx_power = snr * bw;
            let mut g = channel_gain(cfg.center, 1.0, 0.0, 1.0);
            g.magnitude = 1.0;
            let c = capacity(&cfg, g).capacity_bps;
            prop_assert!((c - direct).abs() <= 1e-9 * direct.max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn beam_count_order_independent(seed in any::<u64>(), half in 1e-4f64..0.05) {
        let field = random_field(seed, 2000);
        let cone = build_beam_cone([0.0, 0.0, 50.0], [100.0, 0.0, 50.0], half, 0.01).unwrap();
        let mut reversed = field.clone();
        reversed.particles.reverse();
        prop_assert_eq!(count_in_beam(&field, &cone), count_in_beam(&reversed, &cone));
        let wider = build_beam_cone([0.0, 0.0, 50.0], [100.0, 0.0, 50.0], half * 1.5, 0.01).unwrap();
        prop_assert!(count_in_beam(&field, &cone).total <= count_in_beam(&field, &wider).total);
    }

    #[test]
    fn settling_without_emission_only_removes(seed in any::<u64>(), steps in 1usize..20) {
        let cfg = StormConfig { emission_rate: 0, seed, settling: 0.5, ..StormConfig::default() };
        let mut field = random_field(seed, 500);
        for p in &mut field.particles {
            p.position[0] = 1000.0 + p.position[0] * 50.0;
            p.position[2] = p.position[2].min(100.0);
        }
        for _ in 0..steps {
            let next = step_field(&field, &cfg);
            prop_assert!(next.len() <= field.len());
            field = next;
        }
    }
}

fn random_field(seed: u64, n: usize) -> ParticleField {
    let mut s = dustlink::rng::Stream::new(seed, 0);
    let particles = (0..n)
        .map(|_| Particle {
            position: [s.uniform_in(-1.0, 101.0), s.uniform_in(-3.0, 3.0), s.uniform_in(47.0, 53.0)],
            radius: 1e-6,
        })
        .collect();
    ParticleField { particles, ..ParticleField::default() }
}

#[test]
fn doppler_and_lorentz_shapes_positive_at_center() {
    let l = line(1e12, 2);
    let a = doppler_halfwidth(&l, 210.0);
    assert!(doppler_shape(l.frequency(), &l, a) > 0.0);
    assert!(lorentz_shape(l.frequency(), &l, 1e9, 1.0) > 0.0);
}
