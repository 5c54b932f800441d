use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use mmwsim::reflectarray::{scatter_pattern, ElementFactor, PATTERN_STEP_DEG};
use mmwsim::scenarios::{builtin, l_corridor, meeting_room, LVariant, MeetingCase};
use mmwsim::{
    channel_response, coverage_sweep, design_panel, find_paths, pdp, Endpoint, GainView,
    Normalization, PanelMode, Point2, Window,
};

fn paths(c: &mut Criterion) {
    let s = meeting_room(MeetingCase::Blocked);
    let (tx, rx) = (s.tx[0].position, s.rx[0].position);
    for order in [1, 2, 3] {
        c.bench_function(&format!("find_paths/meeting_room/order{order}"), |b| {
            b.iter(|| find_paths(black_box(&s.scene), tx, rx, order).unwrap())
        });
    }
    let t = builtin("t_corridor", None, None).unwrap();
    c.bench_function("find_paths/t_corridor/order2", |b| {
        b.iter(|| find_paths(black_box(&t.scene), t.tx[0].position, t.rx[3].position, 2).unwrap())
    });
}

fn sweeps(c: &mut Criterion) {
    let s = l_corridor(LVariant::Vertical);
    let txs: Vec<Endpoint> = s.tx.iter().map(|t| t.endpoint()).collect();
    let rx = s.rx[0].endpoint();
    c.bench_function("coverage/l_corridor/16", |b| {
        b.iter(|| {
            coverage_sweep(
                black_box(&s.scene),
                &txs,
                &rx,
                2,
                GainView::BoresightRemoved,
            )
            .unwrap()
        })
    });
}

fn channel(c: &mut Criterion) {
    let s = meeting_room(MeetingCase::Los);
    let (tx, rx) = (s.tx[0].endpoint(), s.rx[0].endpoint());
    let resp = channel_response(&s.scene, &tx, &rx, 2, GainView::BoresightRemoved).unwrap();
    c.bench_function("channel_response/meeting_room", |b| {
        b.iter(|| {
            channel_response(black_box(&s.scene), &tx, &rx, 2, GainView::BoresightRemoved).unwrap()
        })
    });
    c.bench_function("pdp/401x4", |b| {
        b.iter(|| pdp(black_box(&resp), Window::Hann, Normalization::Absolute))
    });
}

fn panel(c: &mut Criterion) {
    let p = design_panel(60.0, 80, PanelMode::Table2).unwrap();
    c.bench_function("scatter_pattern/table2/0.1deg", |b| {
        b.iter(|| {
            scatter_pattern(
                black_box(&p),
                Point2::new(0.0, -1.0),
                60.0,
                PATTERN_STEP_DEG,
                ElementFactor::On,
            )
        })
    });
}

criterion_group!(benches, paths, sweeps, channel, panel);
criterion_main!(benches);
