package app;

import android.content.Context;
import android.content.res.Resources;

public class Palette {
    private final Context context;

    public Palette(Context context) {
        this.context = context;
    }

    public int accent() {
        Resources res = context.getResources();
        int color = res.getColor(R.color.accent);
        return color;
    }
}
