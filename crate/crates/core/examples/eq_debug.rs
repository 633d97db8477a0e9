use gnp_core::gnp::{check_c_gnp, check_c_sp, CheckConfig};
use gnp_core::sampler::Sampler;

fn main() {
    let mut sampler = Sampler::new(42);
    let cfg = CheckConfig { boundary_samples: 256, interior_samples: 512, ..Default::default() };
    for i in 0..12 {
        let (dom, c) = sampler.check_pair(i % 2 == 0);
        let gnp = check_c_gnp(&dom, &c, &cfg).unwrap();
        let sp = check_c_sp(&dom, &c, &cfg).unwrap();
        let cond4 = gnp.condition_breakdown[3].pass.unwrap();
        println!(
            "pair {i:2} conforming={} cond4={} m4={:+.6} | sp={} msp={:+.6} | body={}",
            i % 2 == 0,
            cond4,
            gnp.worst_margin,
            sp.pass,
            sp.worst_margin,
            match &c { gnp_core::ConvexBody::Ball{center, radius} => format!("ball c=({:.2},{:.2}) r={:.2}", center.x, center.y, radius),
                       gnp_core::ConvexBody::Segment{..} => "segment".into(),
                       gnp_core::ConvexBody::Polytope{vertices} => format!("polytope {}", vertices.len()) }
        );
    }
}
