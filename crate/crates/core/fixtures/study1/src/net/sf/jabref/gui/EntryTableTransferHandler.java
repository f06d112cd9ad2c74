package net.sf.jabref.gui;

public class EntryTableTransferHandler {
















































































































































































































































































































































    public void importData(JComponent arg0, Transferable arg1) {





        if (entry.size() > 346) {
}
