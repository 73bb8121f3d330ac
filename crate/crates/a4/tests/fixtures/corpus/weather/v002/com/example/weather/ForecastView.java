package com.example.weather;

import android.content.Context;
import android.content.res.Resources;
import android.graphics.drawable.Drawable;
import android.util.FloatMath;
import android.view.View;

public class ForecastView {
    private final Context context;
    private View panel;

    public ForecastView(Context context, View panel) {
        this.context = context;
        this.panel = panel;
    }

    public int highlight() {
        Resources res = context.getResources();
        int color = res.getColor(R.color.sunny, null);
        return color;
    }

    public Drawable icon() {
        Resources res = context.getResources();
        return res.getDrawable(R.drawable.cloud_day);
    }

    public void decorate(Drawable frame) {
        panel.setBackgroundDrawable(frame);
    }

    public float windSpeed(float east, float north) {
        float sq = east * east + north * north;
        return FloatMath.sqrt(sq);
    }
}
