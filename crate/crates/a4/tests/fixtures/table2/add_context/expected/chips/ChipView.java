package chips;

import android.content.Context;
import android.content.res.Resources;

class ChipView {
    private int color;

    void bind(Context ctx, Resources resources) {
        Resources.Theme theme = ctx.getTheme();
        color = resources.getColor(R.color.chip_fill, theme);
    }
}
